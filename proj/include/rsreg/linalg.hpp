#pragma once

#include <Eigen/Core>

namespace rsreg {

// Spectral norm by full SVD. Exactness matters for certificate checks, so no
// iterative estimators at this scale.
double spectral_norm(const Eigen::MatrixXd& m);

// Smallest singular value.
double sigma_min(const Eigen::MatrixXd& m);

// Spectral norm of U * V^T for tall-skinny U, V (n x k, k small), via thin QR
// of both factors and an exact small SVD of R_u R_v^T.
double low_rank_outer_norm(const Eigen::MatrixXd& u_factor,
                           const Eigen::MatrixXd& v_factor);

// Max |a_ij - a_ji| relative to the largest entry magnitude (0 for empty).
double asymmetry(const Eigen::MatrixXd& m);

}  // namespace rsreg
