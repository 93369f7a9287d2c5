#include "rsreg/linalg.hpp"

#include <Eigen/Dense>

namespace rsreg {

double spectral_norm(const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
}

double sigma_min(const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

double low_rank_outer_norm(const Eigen::MatrixXd& u_factor,
                           const Eigen::MatrixXd& v_factor) {
    const auto k = u_factor.cols();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr_u(u_factor);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr_v(v_factor);
    Eigen::MatrixXd r_u = qr_u.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    Eigen::MatrixXd r_v = qr_v.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    Eigen::MatrixXd core = r_u * r_v.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(core);
    return svd.singularValues()(0);
}

double asymmetry(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) return 1.0;
    const double scale = m.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace rsreg
