#include "rsreg/model.hpp"

#include <cmath>
#include <sstream>

#include "rsreg/linalg.hpp"

namespace rsreg {

FunctionKind companion_kind(FunctionKind kind) {
    switch (kind) {
        case FunctionKind::Exp: return FunctionKind::Exp;
        case FunctionKind::Cosh: return FunctionKind::Sinh;
        case FunctionKind::Sinh: return FunctionKind::Cosh;
    }
    throw Error("unknown function kind");
}

double q_offset(FunctionKind kind) {
    switch (kind) {
        case FunctionKind::Exp: return 0.0;
        case FunctionKind::Cosh: return -1.0;
        case FunctionKind::Sinh: return 1.0;
    }
    throw Error("unknown function kind");
}

std::string to_string(FunctionKind kind) {
    switch (kind) {
        case FunctionKind::Exp: return "exp";
        case FunctionKind::Cosh: return "cosh";
        case FunctionKind::Sinh: return "sinh";
    }
    throw Error("unknown function kind");
}

FunctionKind parse_function_kind(const std::string& name) {
    if (name == "exp") return FunctionKind::Exp;
    if (name == "cosh") return FunctionKind::Cosh;
    if (name == "sinh") return FunctionKind::Sinh;
    throw Error("unknown function kind '" + name + "' (expected exp|cosh|sinh)");
}

namespace {

Vector apply_kind(FunctionKind kind, const Vector& z) {
    switch (kind) {
        case FunctionKind::Exp: return z.array().exp();
        case FunctionKind::Cosh: return z.array().cosh();
        case FunctionKind::Sinh: return z.array().sinh();
    }
    throw Error("unknown function kind");
}

}  // namespace

void ProblemInstance::validate() const {
    if (A.rows() < 1 || A.cols() < 1)
        throw DimensionMismatch("instance requires n >= 1 and d >= 1");
    if (b.size() != A.rows())
        throw DimensionMismatch("b has length " + std::to_string(b.size()) +
                                ", expected " + std::to_string(A.rows()));
    if (w.size() != A.rows())
        throw DimensionMismatch("w has length " + std::to_string(w.size()) +
                                ", expected " + std::to_string(A.rows()));
    if (!A.allFinite() || !b.allFinite() || !w.allFinite())
        throw PreconditionViolated("instance contains non-finite entries");
}

Evaluation evaluate(const ProblemInstance& instance, const Vector& x) {
    instance.validate();
    if (x.size() != instance.d())
        throw DimensionMismatch("x has length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(instance.d()));
    if (!x.allFinite())
        throw PreconditionViolated("x contains non-finite entries");

    Evaluation eval;
    eval.x = x;
    eval.ax = instance.A * x;
    const double ax_inf = eval.ax.lpNorm<Eigen::Infinity>();
    if (ax_inf > kOverflowGuard) {
        std::ostringstream msg;
        msg << "||Ax||_inf = " << ax_inf << " exceeds the overflow guard "
            << kOverflowGuard;
        throw OverflowGuard(msg.str());
    }
    eval.u = apply_kind(instance.kind, eval.ax);
    eval.v = apply_kind(companion_kind(instance.kind), eval.ax);
    eval.alpha = eval.u.sum();
    eval.c = eval.u - eval.alpha * instance.b;
    eval.loss_u = 0.5 * eval.c.squaredNorm();
    eval.loss_reg =
        0.5 * (instance.w.array() * eval.ax.array()).matrix().squaredNorm();
    eval.loss = eval.loss_u + eval.loss_reg;
    return eval;
}

BoundReport check_norm_bounds(const ProblemInstance& instance,
                              const Evaluation& eval, double r) {
    const double a_norm = spectral_norm(instance.A);
    const double x_norm = eval.x.norm();
    const double b_norm = instance.b.norm();
    // allow a hair of floating slack on the re-verified radius hypotheses
    const double slack = 1.0 + 1e-12;
    if (a_norm > r * slack || x_norm > r * slack || b_norm > r * slack) {
        std::ostringstream msg;
        msg << "radius hypothesis failed: ||A|| = " << a_norm << ", ||x|| = "
            << x_norm << ", ||b|| = " << b_norm << ", r = " << r;
        throw PreconditionViolated(msg.str());
    }

    const double n = static_cast<double>(instance.n());
    const double er2 = std::exp(r * r);

    BoundReport report;
    report.r = r;
    report.u_norm = eval.u.norm();
    report.u_ceiling = std::sqrt(n) * er2;
    report.holds_u = report.u_norm <= report.u_ceiling;
    report.alpha_abs = std::abs(eval.alpha);
    report.alpha_ceiling = n * er2;
    report.holds_alpha = report.alpha_abs <= report.alpha_ceiling;
    report.c_norm = eval.c.norm();
    report.c_ceiling = 2.0 * n * r * er2;
    report.c_ceiling_tight = n * r * er2;
    report.holds_c = report.c_norm <= report.c_ceiling;
    return report;
}

}  // namespace rsreg
