#include "rsreg/solver.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <limits>

#include "rsreg/calculus.hpp"
#include "rsreg/linalg.hpp"
#include "rsreg/rng.hpp"
#include "rsreg/sketch.hpp"
#include "rsreg/spectral.hpp"

namespace rsreg {

std::string to_string(SolveMode mode) {
    return mode == SolveMode::Exact ? "exact" : "sketched";
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIters: return "max_iters";
        case SolveStatus::Diverged: return "diverged";
    }
    return "unknown";
}

SolveMode parse_solve_mode(const std::string& name) {
    if (name == "exact") return SolveMode::Exact;
    if (name == "sketched") return SolveMode::Sketched;
    throw Error("unknown solve mode '" + name + "' (expected exact|sketched)");
}

namespace {

Vector spd_solve(const Matrix& h, const Vector& g, const char* what) {
    Eigen::LLT<Matrix> llt(h);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite(what);
    // an exactly singular matrix rounds its zero pivot up to ~sqrt(eps) and
    // slips through info(), so reject near-machine-singular factors too
    const Vector pivots = llt.matrixLLT().diagonal();
    const double pivot_min = pivots.minCoeff();
    const double pivot_max = pivots.maxCoeff();
    const double floor =
        pivot_max * std::sqrt(8.0 * static_cast<double>(h.rows()) *
                              std::numeric_limits<double>::epsilon());
    if (!pivots.allFinite() || !(pivot_min > floor))
        throw NotPositiveDefinite(what);
    Vector solution = llt.solve(g);
    if (!solution.allFinite()) throw NotPositiveDefinite(what);
    return solution;
}

struct StepResult {
    Vector x_next;
    Index sketch_nnz = 0;
};

StepResult exact_step(const ProblemInstance& instance, const Evaluation& eval,
                      const Vector& g, double damping) {
    const Matrix h = hessian(instance, eval);
    StepResult result;
    result.x_next = eval.x - damping * spd_solve(h, g, "Hessian is not positive definite");
    return result;
}

StepResult sketched_step(const ProblemInstance& instance,
                         const Evaluation& eval, const Vector& g, double eps1,
                         double delta1, std::uint64_t seed, double damping) {
    const Vector surrogate = hessian_diag_surrogate(instance, eval);
    if ((surrogate.array() <= 0.0).any())
        throw NonPositiveSurrogate("diagonal surrogate has a non-positive entry");
    const SketchedDiagonal sketched =
        subsample(instance.A, surrogate, eps1, delta1, seed);
    const Matrix h = sketched_gram(instance.A, sketched);
    StepResult result;
    result.x_next =
        eval.x - damping * spd_solve(h, g, "sketched Hessian is not positive definite");
    result.sketch_nnz = sketched.nnz();
    return result;
}

}  // namespace

Vector newton_step_exact(const ProblemInstance& instance, const Vector& x) {
    const Evaluation eval = evaluate(instance, x);
    const Vector g = gradient(instance, eval);
    return exact_step(instance, eval, g, 1.0).x_next;
}

Vector newton_step_sketched(const ProblemInstance& instance, const Vector& x,
                            double eps1, double delta1, std::uint64_t seed) {
    const Evaluation eval = evaluate(instance, x);
    const Vector g = gradient(instance, eval);
    return sketched_step(instance, eval, g, eps1, delta1, seed, 1.0).x_next;
}

ConvergenceTrace solve(const ProblemInstance& instance, const Vector& x0,
                       const SolveOptions& options) {
    instance.validate();
    if ((instance.w.array() <= 0.0).any())
        throw PreconditionViolated("solver requires strictly positive weights");
    if (!(options.eps > 0.0 && options.eps < 0.1))
        throw PreconditionViolated("eps must lie in (0, 0.1)");
    if (!(options.delta > 0.0 && options.delta < 0.1))
        throw PreconditionViolated("delta must lie in (0, 0.1)");

    const int budget = options.fixed_iterations.value_or(options.max_iters);
    if (budget < 1) throw PreconditionViolated("iteration budget must be >= 1");
    const double delta1 = options.delta / static_cast<double>(budget);

    ConvergenceTrace trace;
    trace.final_x = x0;
    Vector x = x0;
    double prev_loss = std::numeric_limits<double>::infinity();
    int rising = 0;

    using Clock = std::chrono::steady_clock;
    for (int t = 0; t < budget; ++t) {
        const auto tick = Clock::now();
        const Evaluation eval = evaluate(instance, x);
        const Vector g = gradient(instance, eval);

        StepResult step;
        if (options.mode == SolveMode::Exact) {
            step = exact_step(instance, eval, g, options.damping);
        } else {
            step = sketched_step(instance, eval, g, options.eps1, delta1,
                                 mix_seed(options.seed, static_cast<std::uint64_t>(t)),
                                 options.damping);
        }
        const double step_norm = (step.x_next - x).norm();

        IterationRecord record;
        record.iter = t;
        record.x = x;
        record.loss = eval.loss;
        record.grad_norm = g.norm();
        record.step_norm = step_norm;
        if (options.reference)
            record.dist_to_ref = (x - *options.reference).norm();
        record.sketch_nnz = step.sketch_nnz;
        record.wall_ms =
            options.timing
                ? std::chrono::duration<double, std::milli>(Clock::now() - tick)
                      .count()
                : 0.0;
        trace.iterations.push_back(std::move(record));

        rising = (eval.loss > prev_loss) ? rising + 1 : 0;
        prev_loss = eval.loss;
        if (rising >= 5) {
            trace.status = SolveStatus::Diverged;
            trace.final_x = x;
            return trace;
        }

        x = step.x_next;
        trace.final_x = x;
        if (!options.fixed_iterations && step_norm <= options.eps) {
            trace.status = SolveStatus::Converged;
            return trace;
        }
    }

    if (options.fixed_iterations && !trace.iterations.empty() &&
        trace.iterations.back().step_norm <= options.eps) {
        trace.status = SolveStatus::Converged;
    } else {
        trace.status = SolveStatus::MaxIters;
    }
    return trace;
}

GoodnessCertificate certify_goodness(const ProblemInstance& instance,
                                     const Vector& x_star, const Vector& x0,
                                     double l, double m,
                                     double stationarity_tol) {
    GoodnessCertificate cert;
    cert.l = l;
    cert.m = m;
    cert.r0 = (x0 - x_star).norm();

    const Evaluation eval = evaluate(instance, x_star);
    const Vector g = gradient(instance, eval);
    const Matrix h = hessian(instance, eval);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (h + h.transpose()),
                                              Eigen::EigenvaluesOnly);
    const double lambda_min = eig.eigenvalues()(0);
    // stationarity in the Newton metric: ||H^{-1} g|| small
    double decrement = std::numeric_limits<double>::infinity();
    if (lambda_min > 0.0) {
        Eigen::LLT<Matrix> llt(h);
        if (llt.info() == Eigen::Success) decrement = llt.solve(g).norm();
    }
    cert.ok_local_min =
        lambda_min >= l * (1.0 - kEigenSlack) && decrement <= stationarity_tol;

    // probe the Lipschitz claim on a handful of short segments near x_star;
    // the probe radius is capped so the probes stay inside the guard region
    cert.ok_lipschitz = m > 0.0;
    Rng rng(0x9e3779b9u);
    const double probe_radius = std::min(
        std::max(cert.r0, 1e-6 * std::max(1.0, x_star.norm())), 1.0);
    for (int trial = 0; trial < 8 && cert.ok_lipschitz; ++trial) {
        Vector dir(x_star.size());
        for (Index i = 0; i < dir.size(); ++i) dir(i) = rng.normal();
        if (dir.norm() == 0.0) continue;
        dir *= probe_radius / dir.norm();
        const Vector xa = x_star + 0.5 * dir;
        const Vector xb = x_star - 0.5 * dir;
        const Matrix ha = hessian(instance, evaluate(instance, xa));
        const Matrix hb = hessian(instance, evaluate(instance, xb));
        const double ratio = spectral_norm(ha - hb) / (xa - xb).norm();
        if (ratio > m * (1.0 + kEigenSlack)) cert.ok_lipschitz = false;
    }

    cert.ok_init = cert.r0 * m <= 0.1 * l;
    return cert;
}

ContractionAudit audit_contraction(const ConvergenceTrace& trace,
                                   const Vector& x_star, double l, double m,
                                   double eps0) {
    ContractionAudit audit;
    for (std::size_t t = 0; t < trace.iterations.size(); ++t) {
        const Vector& x_t = trace.iterations[t].x;
        const Vector& x_next = (t + 1 < trace.iterations.size())
                                   ? trace.iterations[t + 1].x
                                   : trace.final_x;
        const double r_t = (x_t - x_star).norm();
        if (r_t <= 0.0) continue;
        ContractionStep step;
        step.iter = trace.iterations[t].iter;
        step.r_before = r_t;
        step.r_after = (x_next - x_star).norm();
        step.ratio = step.r_after / r_t;
        const double mr = m * r_t;
        step.ceiling = (l > mr)
                           ? 2.0 * (eps0 + mr / (l - mr))
                           : std::numeric_limits<double>::infinity();
        step.ok = step.ratio <= step.ceiling;
        audit.all_ok = audit.all_ok && step.ok;
        audit.steps.push_back(step);
    }
    return audit;
}

}  // namespace rsreg
