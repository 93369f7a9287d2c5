#include "rsreg/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>

#include "rsreg/linalg.hpp"

namespace rsreg {

double point_radius(const ProblemInstance& instance, const Evaluation& eval) {
    double r0 = 1.0;
    r0 = std::max(r0, eval.u.norm());
    r0 = std::max(r0, eval.v.norm());
    r0 = std::max(r0, instance.b.norm());
    r0 = std::max(r0, eval.c.norm());
    return r0;
}

double pairwise_radius(const ProblemInstance& instance, const Evaluation& ex,
                       const Evaluation& ey) {
    double r = 1.0;
    r = std::max({r, ex.u.norm(), ey.u.norm(), ex.v.norm(), ey.v.norm(),
                  ex.c.norm(), ey.c.norm(), instance.b.norm()});
    return r;
}

double weight_threshold(double r0, double sigma_min_a, double l,
                        ThresholdMode mode) {
    if (sigma_min_a <= 0.0)
        throw SingularA("weight threshold requires sigma_min(A) > 0");
    if (l <= 0.0)
        throw PreconditionViolated("weight threshold requires l > 0");
    const double factor = (mode == ThresholdMode::Psd) ? 10.0 : 200.0;
    const double r0sq = r0 * r0;
    return factor * r0sq * r0sq + l / (sigma_min_a * sigma_min_a);
}

bool certify_psd(const Matrix& h_full, double l) {
    if (h_full.rows() != h_full.cols())
        throw NonSymmetric("PSD certificate requires a square matrix");
    if (asymmetry(h_full) > 1e-8)
        throw NonSymmetric("PSD certificate requires a symmetric matrix");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h_full,
                                              Eigen::EigenvaluesOnly);
    const double lambda_min = eig.eigenvalues()(0);
    return lambda_min >= l * (1.0 - kEigenSlack);
}

bool certify_dominance(const Matrix& b_full, const Vector& w) {
    if (b_full.rows() != b_full.cols() || b_full.rows() != w.size())
        throw DimensionMismatch("dominance certificate shape mismatch");
    if (asymmetry(b_full) > 1e-8)
        throw NonSymmetric("dominance certificate requires symmetric B");

    const Index n = w.size();
    Matrix pencil = b_full;
    pencil.diagonal() += w.array().square().matrix();
    Eigen::LLT<Matrix> llt(pencil);
    if (llt.info() != Eigen::Success)
        throw IndefinitePencil("B + W^2 is not positive definite");

    // whiten: eigenvalues of L^{-1} W^2 L^{-T}
    Matrix l_inv = Matrix::Identity(n, n);
    llt.matrixL().solveInPlace(l_inv);
    Matrix whitened =
        l_inv * w.array().square().matrix().asDiagonal() * l_inv.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(whitened, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues()(0);
    const double hi = eig.eigenvalues()(n - 1);
    const double slack = kEigenSlack * std::max(1.0, std::abs(hi));
    return lo >= 0.9 - slack && hi <= 1.1 + slack;
}

CeilingValue lipschitz_ceiling(Index n, double r) {
    CeilingValue ceiling;
    ceiling.log_value = 4.0 * std::log(static_cast<double>(n)) + 20.0 * r * r;
    ceiling.r_hypothesis_met = r > 4.0;
    const double log_max = std::log(std::numeric_limits<double>::max());
    if (ceiling.log_value > log_max) {
        ceiling.overflowed = true;
        ceiling.value = std::numeric_limits<double>::infinity();
    } else {
        ceiling.value = std::exp(ceiling.log_value);
    }
    return ceiling;
}

bool ceiling_holds(double ratio, const CeilingValue& ceiling) {
    if (ratio <= 0.0) return true;
    if (!ceiling.overflowed) return ratio <= ceiling.value;
    return std::log(ratio) <= ceiling.log_value;
}

namespace {

void check_pair_hypotheses(const ProblemInstance& instance, const Vector& x,
                           const Vector& y, double r) {
    if (x.size() != instance.d() || y.size() != instance.d())
        throw DimensionMismatch("point length does not match instance");
    const double slack = 1.0 + 1e-12;
    const double a_norm = spectral_norm(instance.A);
    const double b_norm = instance.b.norm();
    if (x.norm() > r * slack || y.norm() > r * slack || a_norm > r * slack ||
        b_norm > r * slack) {
        std::ostringstream msg;
        msg << "radius hypothesis failed for the pair (r = " << r << ")";
        throw PreconditionViolated(msg.str());
    }
    const double gap = (instance.A * (x - y)).lpNorm<Eigen::Infinity>();
    if (gap > 0.01) {
        std::ostringstream msg;
        msg << "||A(x - y)||_inf = " << gap << " exceeds the small-range bound 0.01";
        throw PreconditionViolated(msg.str());
    }
}

}  // namespace

double empirical_lipschitz(const ProblemInstance& instance, const Vector& x,
                           const Vector& y, double r) {
    check_pair_hypotheses(instance, x, y, r);
    const double dx = (x - y).norm();
    if (dx == 0.0) return 0.0;
    const Matrix hx = hessian(instance, evaluate(instance, x));
    const Matrix hy = hessian(instance, evaluate(instance, y));
    return spectral_norm(hx - hy) / dx;
}

GTermReport g_terms(const ProblemInstance& instance, const Vector& x,
                    const Vector& y, double r) {
    check_pair_hypotheses(instance, x, y, r);
    const Evaluation ex = evaluate(instance, x);
    const Evaluation ey = evaluate(instance, y);
    const Vector& b = instance.b;
    const Index n = instance.n();

    const Vector vbx = (ex.v.array() * b.array()).matrix();
    const Vector vby = (ey.v.array() * b.array()).matrix();

    GTermReport report;
    // G1..G3 have rank <= 2; their norms come from the factored form.
    Matrix left(n, 2), right(n, 2);
    left.col(0) = ex.v;
    left.col(1) = -ey.v;
    right.col(0) = vbx;
    right.col(1) = vby;
    report.norms[0] = low_rank_outer_norm(left, right);

    left.col(0) = vbx;
    left.col(1) = -vby;
    right.col(0) = ex.v;
    right.col(1) = ey.v;
    report.norms[1] = low_rank_outer_norm(left, right);

    left.col(0) = ex.v;
    left.col(1) = -ey.v;
    right.col(0) = ex.v;
    right.col(1) = ey.v;
    report.norms[2] = b.squaredNorm() * low_rank_outer_norm(left, right);

    // G4, G5 are diagonal (the q offsets cancel in the difference).
    const Vector g4 = ((ex.u.array() + ex.c.array()) * ex.u.array() -
                       (ey.u.array() + ey.c.array()) * ey.u.array())
                          .matrix();
    report.norms[3] = g4.lpNorm<Eigen::Infinity>();
    const Vector g5 = (ex.c.dot(b) * ex.u - ey.c.dot(b) * ey.u);
    report.norms[4] = g5.lpNorm<Eigen::Infinity>();

    report.sum = 0.0;
    for (double nrm : report.norms) report.sum += nrm;

    report.r_inf = pairwise_radius(instance, ex, ey);
    report.du_norm = (ex.u - ey.u).norm();
    report.dc_norm = (ex.c - ey.c).norm();
    const double r_inf3 = report.r_inf * report.r_inf * report.r_inf;
    report.part1_ceiling =
        20.0 * r_inf3 * std::max(report.du_norm, report.dc_norm);
    report.part2_ceiling = 100.0 * r_inf3 * r *
                           std::sqrt(static_cast<double>(n)) * report.du_norm;
    // additive floor at the ceiling's own scale absorbs rounding noise when
    // the pair is (nearly) coincident and both sides vanish
    const double slack = 1.0 + 1e-12;
    const double floor1 = 1e-12 * 20.0 * r_inf3;
    const double floor2 =
        1e-12 * 100.0 * r_inf3 * r * std::sqrt(static_cast<double>(n));
    report.part1_ok = report.sum <= report.part1_ceiling * slack + floor1;
    report.part2_ok = report.sum <= report.part2_ceiling * slack + floor2;
    return report;
}

BlockBoundReport check_block_bounds(const ProblemInstance& instance,
                                    const Evaluation& eval) {
    const Vector& u = eval.u;
    const Vector& v = eval.v;
    const Vector& c = eval.c;
    const Vector& b = instance.b;
    const double b_norm = b.norm();
    const double v_norm = v.norm();
    const double u_inf = u.lpNorm<Eigen::Infinity>();
    const double c_inf = c.lpNorm<Eigen::Infinity>();
    const double q = q_offset(instance.kind);
    const double slack = 1.0 + kEigenSlack;

    const HessianView view = hessian_blocks(instance, eval);

    BlockBoundReport report;
    const Matrix sym12 = 0.5 * (view.b12 + view.b12.transpose());
    const Matrix sym13 = 0.5 * (view.b13 + view.b13.transpose());
    report.rank_cross_norm =
        std::max(spectral_norm(sym12), spectral_norm(sym13));
    report.rank_cross_ceiling = b_norm * v_norm * v_norm;
    report.holds_rank_cross =
        report.rank_cross_norm <= report.rank_cross_ceiling * slack;

    report.b14_residual =
        spectral_norm(view.b14 - b.squaredNorm() * (v * v.transpose()));
    report.holds_b14 =
        report.b14_residual <= kEigenSlack * std::max(1.0, b.squaredNorm() * v_norm * v_norm);

    report.diag1_norm =
        ((u.array() + c.array()) * u.array() + q).abs().maxCoeff();
    report.diag1_ceiling = 1.0 + (u_inf + c_inf) * u_inf;
    report.holds_diag1 = report.diag1_norm <= report.diag1_ceiling * slack;

    report.diag2_norm = std::abs(c.dot(b)) * u_inf;
    report.diag2_ceiling = b_norm * c.norm() * u_inf;
    report.holds_diag2 = report.diag2_norm <= report.diag2_ceiling * slack;

    const double r0 = point_radius(instance, eval);
    report.b_norm = spectral_norm(view.b_full);
    report.b_ceiling = 10.0 * r0 * r0 * r0 * r0;
    report.holds_b = report.b_norm <= report.b_ceiling * slack;
    return report;
}

SpectralCertificate certify_spectral(const ProblemInstance& instance,
                                     const Vector& x, const Vector& y,
                                     double l, double r) {
    const Evaluation ex = evaluate(instance, x);
    const Evaluation ey = evaluate(instance, y);

    SpectralCertificate cert;
    cert.r0 = point_radius(instance, ex);
    cert.r_inf = pairwise_radius(instance, ex, ey);
    cert.sigma_min = sigma_min(instance.A);
    cert.l = l;

    const HessianView view = hessian_blocks(instance, ex);
    cert.passed[0] = check_block_bounds(instance, ex).all();

    const double w_min_sq = instance.w.array().square().minCoeff();
    const double psd_threshold =
        weight_threshold(cert.r0, cert.sigma_min, l, ThresholdMode::Psd);
    cert.passed[1] = w_min_sq < psd_threshold * (1.0 - 1e-12) ||
                     certify_psd(view.h_full, l);
    const double dom_threshold =
        weight_threshold(cert.r0, cert.sigma_min, l, ThresholdMode::Dominance);
    cert.passed[2] = w_min_sq < dom_threshold * (1.0 - 1e-12) ||
                     certify_dominance(view.b_full, instance.w);

    const CeilingValue ceiling = lipschitz_ceiling(instance.n(), r);
    cert.m = ceiling.value;
    cert.passed[3] =
        ceiling_holds(empirical_lipschitz(instance, x, y, r), ceiling);

    const GTermReport g = g_terms(instance, x, y, r);
    cert.passed[4] = g.part1_ok;
    cert.passed[5] = g.part2_ok;
    return cert;
}

}  // namespace rsreg
