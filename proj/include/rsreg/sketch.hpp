#pragma once

#include <cstdint>
#include <vector>

#include "rsreg/model.hpp"

namespace rsreg {

// Matrix-Chernoff oversampling constant in p_i = min(1, C tau_i log(n/d)/e^2).
// Chosen so the observed sandwich failure rate stays below delta across large
// trial batches; recorded in every SketchedDiagonal so tests can pin it.
inline constexpr double kDefaultOversampling = 40.0;

// Sparse positive diagonal approximating a dense one in the A^T . A metric.
struct SketchedDiagonal {
    std::vector<Index> indices;   // retained rows, ascending
    std::vector<double> values;   // d_i / p_i, strictly positive
    Index n = 0;
    std::uint64_t seed = 0;
    double eps = 0.0;
    double delta = 0.0;
    double oversampling = kDefaultOversampling;

    Index nnz() const { return static_cast<Index>(indices.size()); }
    Vector dense() const;
};

// Leverage scores of diag(d)^{1/2} A: squared row norms of the orthonormal
// factor. Sum to the column count. Requires full column rank and d > 0.
Vector leverage_scores(const Matrix& a, const Vector& d_diag);

// Independent row sampling with p_i = min(1, C tau_i log(n/delta)/eps^2) and
// Horvitz-Thompson rescaling d_i / p_i, so A^T D~ A is unbiased for A^T D A.
SketchedDiagonal subsample(const Matrix& a, const Vector& d_diag, double eps,
                           double delta, std::uint64_t seed,
                           double oversampling = kDefaultOversampling);

// Whitens A^T D A and checks every eigenvalue of the whitened A^T D~ A lies
// in [1 - eps, 1 + eps].
bool verify_sandwich(const Matrix& a, const Vector& d_diag,
                     const SketchedDiagonal& sketched, double eps);

// A^T D~ A accumulated over retained rows only.
Matrix sketched_gram(const Matrix& a, const SketchedDiagonal& sketched);

}  // namespace rsreg
