#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rsreg/model.hpp"

namespace rsreg {

enum class SolveMode { Exact, Sketched };
enum class SolveStatus { Converged, MaxIters, Diverged };

std::string to_string(SolveMode mode);
std::string to_string(SolveStatus status);
SolveMode parse_solve_mode(const std::string& name);

struct IterationRecord {
    int iter = 0;
    Vector x;  // iterate before the step
    double loss = 0.0;
    double grad_norm = 0.0;
    double step_norm = 0.0;
    std::optional<double> dist_to_ref;
    Index sketch_nnz = 0;  // 0 in exact mode
    double wall_ms = 0.0;
};

struct ConvergenceTrace {
    std::vector<IterationRecord> iterations;
    SolveStatus status = SolveStatus::MaxIters;
    Vector final_x;
};

struct SolveOptions {
    SolveMode mode = SolveMode::Exact;
    double eps = 1e-8;      // stop when the Newton step norm falls below this
    double delta = 0.05;    // total failure budget, split delta/T per iteration
    double eps1 = 0.05;     // per-iteration sketch accuracy
    int max_iters = 50;
    std::uint64_t seed = 0;
    std::optional<Vector> reference;        // fills dist_to_ref when given
    std::optional<int> fixed_iterations;    // run exactly T steps (audit mode)
    bool timing = true;                     // wall_ms = 0 when off
    double damping = 1.0;                   // study knob; 1 = plain update
};

// One exact Newton step x - H(x)^{-1} g(x) through a symmetric
// positive-definite solve.
Vector newton_step_exact(const ProblemInstance& instance, const Vector& x);

// One sketched step: D = B_diag + diag(w∘w), D~ = subsample(D, A, eps1,
// delta1), x - (A^T D~ A)^{-1} g(x).
Vector newton_step_sketched(const ProblemInstance& instance, const Vector& x,
                            double eps1, double delta1, std::uint64_t seed);

ConvergenceTrace solve(const ProblemInstance& instance, const Vector& x0,
                       const SolveOptions& options);

// (l, M)-goodness: a PSD floor at the reference optimum, a Hessian Lipschitz
// constant, and an initial point with r0 M <= 0.1 l.
struct GoodnessCertificate {
    double l = 0.0;
    double m = 0.0;
    double r0 = 0.0;
    bool ok_local_min = false;
    bool ok_lipschitz = false;
    bool ok_init = false;
    bool good() const { return ok_local_min && ok_lipschitz && ok_init; }
};

// Measures stationarity and the PSD floor at x_star, probes the Lipschitz
// constant m on pairs near x_star, and checks the basin condition for x0.
GoodnessCertificate certify_goodness(const ProblemInstance& instance,
                                     const Vector& x_star, const Vector& x0,
                                     double l, double m,
                                     double stationarity_tol = 1e-8);

struct ContractionStep {
    int iter = 0;
    double r_before = 0.0;
    double r_after = 0.0;
    double ratio = 0.0;
    double ceiling = 0.0;  // 2 (eps0 + M r_t / (l - M r_t)); +inf if l <= M r_t
    bool ok = false;
};

struct ContractionAudit {
    std::vector<ContractionStep> steps;
    bool all_ok = true;
};

// Per-step shrink ratios against the iterative-shrinking ceiling. Steps with
// r_t = 0 are skipped (no ratio is defined at a stationary start).
ContractionAudit audit_contraction(const ConvergenceTrace& trace,
                                   const Vector& x_star, double l, double m,
                                   double eps0);

}  // namespace rsreg
