#include "rsreg/sketch.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "rsreg/rng.hpp"

namespace rsreg {

Vector SketchedDiagonal::dense() const {
    Vector d = Vector::Zero(n);
    for (std::size_t k = 0; k < indices.size(); ++k) d(indices[k]) = values[k];
    return d;
}

Vector leverage_scores(const Matrix& a, const Vector& d_diag) {
    if (d_diag.size() != a.rows())
        throw DimensionMismatch("diagonal length does not match row count");
    if ((d_diag.array() <= 0.0).any())
        throw NonPositiveDiagonal("leverage scores require a positive diagonal");

    const Matrix weighted = d_diag.array().sqrt().matrix().asDiagonal() * a;
    Eigen::BDCSVD<Matrix> svd(weighted, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double tol = sv(0) * static_cast<double>(std::max(a.rows(), a.cols())) *
                       std::numeric_limits<double>::epsilon();
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    if (rank < a.cols())
        throw RankDeficient("matrix does not have full column rank");
    return svd.matrixU().rowwise().squaredNorm();
}

SketchedDiagonal subsample(const Matrix& a, const Vector& d_diag, double eps,
                           double delta, std::uint64_t seed,
                           double oversampling) {
    if (!(eps > 0.0 && eps <= 0.1))
        throw InvalidEps("eps must lie in (0, 0.1]");
    if (!(delta > 0.0 && delta <= 0.1))
        throw InvalidDelta("delta must lie in (0, 0.1]");
    if ((d_diag.array() <= 0.0).any())
        throw NonPositiveDiagonal("subsample requires a positive diagonal");

    const Vector tau = leverage_scores(a, d_diag);
    const Index n = a.rows();
    const double log_term = std::log(static_cast<double>(n) / delta);
    const double scale = oversampling * log_term / (eps * eps);

    SketchedDiagonal sketched;
    sketched.n = n;
    sketched.seed = seed;
    sketched.eps = eps;
    sketched.delta = delta;
    sketched.oversampling = oversampling;

    Rng rng(seed);
    for (Index i = 0; i < n; ++i) {
        const double p = std::min(1.0, scale * tau(i));
        const double draw = rng.uniform();
        if (draw < p) {
            sketched.indices.push_back(i);
            sketched.values.push_back(d_diag(i) / p);
        }
    }
    return sketched;
}

Matrix sketched_gram(const Matrix& a, const SketchedDiagonal& sketched) {
    if (sketched.n != a.rows())
        throw DimensionMismatch("sketch row count does not match matrix");
    Matrix gram = Matrix::Zero(a.cols(), a.cols());
    for (std::size_t k = 0; k < sketched.indices.size(); ++k) {
        const auto row = a.row(sketched.indices[k]);
        gram.noalias() += sketched.values[k] * (row.transpose() * row);
    }
    return gram;
}

bool verify_sandwich(const Matrix& a, const Vector& d_diag,
                     const SketchedDiagonal& sketched, double eps) {
    if ((d_diag.array() <= 0.0).any())
        throw NonPositiveDiagonal("sandwich base requires a positive diagonal");
    const Matrix base = a.transpose() * d_diag.asDiagonal() * a;
    Eigen::LLT<Matrix> llt(base);
    if (llt.info() != Eigen::Success)
        throw IndefiniteBase("A^T D A is not positive definite");

    Matrix l_inv = Matrix::Identity(a.cols(), a.cols());
    llt.matrixL().solveInPlace(l_inv);
    const Matrix whitened = l_inv * sketched_gram(a, sketched) * l_inv.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(whitened, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues()(0);
    const double hi = eig.eigenvalues()(eig.eigenvalues().size() - 1);
    const double slack = 1e-9 * std::max(1.0, std::abs(hi));
    return lo >= 1.0 - eps - slack && hi <= 1.0 + eps + slack;
}

}  // namespace rsreg
