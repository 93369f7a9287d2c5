#pragma once

#include "rsreg/model.hpp"

namespace rsreg {

// Gradient of the full loss:
//   A^T (c ∘ v - v <b, c>) + A^T W^2 A x.
Vector gradient(const ProblemInstance& instance, const Evaluation& eval);

// The six n x n kernel blocks of the Hessian of the unregularized loss,
// their sum B, the d x d Hessian A^T (B + W^2) A, and the diagonal
// surrogate the sketched solver consumes.
//
// Blocks (all built from the companion v in the rank-one terms):
//   b11 = diag(v ∘ v)                b21 = diag(c ∘ u)
//   b12 = -(v ∘ b) v^T               b22 = -<c, b> diag(u)
//   b13 = -v (v ∘ b)^T
//   b14 = ||b||^2 v v^T
// The surrogate uses the diagonal split diag((u + c) ∘ u + q) + b22; its
// diagonal equals b11 + b21 + b22 by the hyperbolic identity v∘v = u∘u + q.
struct HessianView {
    Matrix b11, b12, b13, b14, b21, b22;
    Matrix b_full;          // sum of the six blocks, n x n
    Vector diag_surrogate;  // ((u + c) ∘ u + q) - <c,b> u + w ∘ w
    Matrix h_full;          // A^T (b_full + W^2) A, d x d
};

// Dense n x n blocks are only materialized at verification scale.
inline constexpr Index kDenseBlockLimit = 2000;

HessianView hessian_blocks(const ProblemInstance& instance,
                           const Evaluation& eval);

// d x d Hessian assembled as A^T diag(...) A plus rank-one corrections,
// without any n x n intermediate. This is the solver path.
Matrix hessian(const ProblemInstance& instance, const Evaluation& eval);

// Diagonal surrogate alone (the matrix D the sketch samples from).
Vector hessian_diag_surrogate(const ProblemInstance& instance,
                              const Evaluation& eval);

// Central-difference oracles; test/certificate code only.
Vector fd_gradient(const ProblemInstance& instance, const Vector& x,
                   double step);
Matrix fd_hessian(const ProblemInstance& instance, const Vector& x,
                  double step);

inline constexpr double kFdGradientStep = 1e-5;
inline constexpr double kFdHessianStep = 1e-4;

}  // namespace rsreg
