#pragma once

#include <Eigen/Core>
#include <string>

#include "rsreg/errors.hpp"

namespace rsreg {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Entrywise map applied to Ax. The companion is the entrywise derivative
// partner (exp->exp, cosh->sinh, sinh->cosh); the q offset is the constant
// turning companion(z)^2 into u(z)^2 + q.
enum class FunctionKind { Exp, Cosh, Sinh };

FunctionKind companion_kind(FunctionKind kind);
double q_offset(FunctionKind kind);
std::string to_string(FunctionKind kind);
FunctionKind parse_function_kind(const std::string& name);

// Points with ||Ax||_inf beyond this are rejected: exp overflows near 709
// and the loss squares u, so 80 leaves ample headroom.
inline constexpr double kOverflowGuard = 80.0;

// Fixed data of one regression problem: A (n x d), target b, ridge weights w.
struct ProblemInstance {
    Matrix A;
    Vector b;
    Vector w;
    FunctionKind kind = FunctionKind::Exp;

    Index n() const { return A.rows(); }
    Index d() const { return A.cols(); }

    // Shape/finiteness checks. Positivity of w is only demanded by the solver.
    void validate() const;
};

// All point-dependent quantities at x.
struct Evaluation {
    Vector x;
    Vector ax;       // A x
    Vector u;        // u(Ax) entrywise
    Vector v;        // companion(Ax) entrywise
    double alpha;    // <u, 1>
    Vector c;        // u - alpha * b
    double loss_u;   // 0.5 ||c||^2
    double loss_reg; // 0.5 ||diag(w) A x||^2
    double loss;     // loss_u + loss_reg
};

Evaluation evaluate(const ProblemInstance& instance, const Vector& x);

// Measured norms against their radius-r ceilings. The c ceiling is recorded
// in two forms; `holds_c` tests the 2nr e^{r^2} one, which is the constant
// the triangle-inequality derivation actually yields.
struct BoundReport {
    double r = 0.0;
    double u_norm = 0.0;
    double u_ceiling = 0.0;
    bool holds_u = false;
    double alpha_abs = 0.0;
    double alpha_ceiling = 0.0;
    bool holds_alpha = false;
    double c_norm = 0.0;
    double c_ceiling = 0.0;        // 2 n r exp(r^2)
    double c_ceiling_tight = 0.0;  // n r exp(r^2)
    bool holds_c = false;

    bool all() const { return holds_u && holds_alpha && holds_c; }
};

// Verifies ||A|| <= r, ||x||_2 <= r, ||b||_2 <= r, then measures
// ||u||_2 vs sqrt(n) e^{r^2}, |alpha| vs n e^{r^2}, ||c||_2 vs 2nr e^{r^2}.
BoundReport check_norm_bounds(const ProblemInstance& instance,
                              const Evaluation& eval, double r);

}  // namespace rsreg
