#include "rsreg/shift.hpp"

#include <cmath>
#include <sstream>

#include "rsreg/linalg.hpp"

namespace rsreg {

namespace {

// Numerically-zero test for alpha; sinh can genuinely vanish at Ax = 0.
bool alpha_is_zero(double alpha, const Vector& u) {
    const double scale =
        std::sqrt(static_cast<double>(u.size())) * std::max(u.norm(), 1.0);
    return std::abs(alpha) <= 1e-14 * scale;
}

ShiftResult assemble(const ProblemInstance& instance, const Evaluation& at,
                     const Evaluation& next, double r, double displacement) {
    if (alpha_is_zero(at.alpha, at.u))
        throw AlphaZero("alpha vanishes at the base point");

    ShiftResult result;
    result.alpha_inv_abs = std::abs(1.0 / at.alpha);
    result.delta_b = (next.c - at.c) / at.alpha;
    result.dc_norm = (next.c - at.c).norm();

    // both sides of the defining norm identity, computed independently
    const double lhs = next.c.squaredNorm();
    const Vector reconstructed =
        at.u - at.alpha * (instance.b - result.delta_b);
    const double rhs = reconstructed.squaredNorm();
    result.reconstruction_residual =
        std::abs(lhs - rhs) / std::max({lhs, rhs, 1e-300});

    const double n = static_cast<double>(instance.n());
    const double er2 = std::exp(r * r);
    result.bound_value = er2 * (1.0 + std::sqrt(n) * instance.b.norm()) * 2.0 *
                         std::sqrt(n) * r * er2 * displacement;
    result.within_bound = result.delta_b.norm() <= result.bound_value;
    return result;
}

}  // namespace

ShiftResult shift_in_x(const ProblemInstance& instance, const Vector& x_t,
                       const Vector& x_next, double r) {
    const double slack = 1.0 + 1e-12;
    if (x_t.norm() > r * slack || x_next.norm() > r * slack ||
        spectral_norm(instance.A) > r * slack ||
        instance.b.norm() > r * slack)
        throw PreconditionViolated("shift points violate the radius hypothesis");
    const double gap = (instance.A * (x_next - x_t)).lpNorm<Eigen::Infinity>();
    if (gap > 0.01) {
        std::ostringstream msg;
        msg << "||A(x_next - x_t)||_inf = " << gap << " exceeds the small-range bound 0.01";
        throw PreconditionViolated(msg.str());
    }
    const Evaluation at = evaluate(instance, x_t);
    const Evaluation next = evaluate(instance, x_next);
    return assemble(instance, at, next, r, (x_next - x_t).norm());
}

ShiftResult shift_in_A(const ProblemInstance& instance_t,
                       const ProblemInstance& instance_next, const Vector& x,
                       double r) {
    if (instance_t.kind != instance_next.kind ||
        instance_t.b != instance_next.b || instance_t.w != instance_next.w)
        throw PreconditionViolated(
            "A-shift requires instances sharing b, w, and kind");
    if (instance_t.A.rows() != instance_next.A.rows() ||
        instance_t.A.cols() != instance_next.A.cols())
        throw DimensionMismatch("A-shift matrices differ in shape");
    const double slack = 1.0 + 1e-12;
    if (spectral_norm(instance_t.A) > r * slack ||
        spectral_norm(instance_next.A) > r * slack ||
        x.norm() > r * slack || instance_t.b.norm() > r * slack)
        throw PreconditionViolated("A-shift violates the radius hypothesis");
    const double gap =
        ((instance_next.A - instance_t.A) * x).lpNorm<Eigen::Infinity>();
    if (gap > 0.01) {
        std::ostringstream msg;
        msg << "||(A_next - A_t) x||_inf = " << gap << " exceeds the small-range bound 0.01";
        throw PreconditionViolated(msg.str());
    }
    const Evaluation at = evaluate(instance_t, x);
    const Evaluation next = evaluate(instance_next, x);
    return assemble(instance_t, at, next, r,
                    spectral_norm(instance_next.A - instance_t.A));
}

}  // namespace rsreg
