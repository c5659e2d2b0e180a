#include "bathyslam/svgp/kernel.hpp"

namespace bathyslam {

Eigen::MatrixXd pairwise_distances(const Mat2x& a, const Mat2x& b) {
    const Eigen::Index na = a.rows();
    const Eigen::Index nb = b.rows();
    Eigen::MatrixXd d(na, nb);
    for (Eigen::Index j = 0; j < nb; ++j) {
        d.col(j) = (a.rowwise() - b.row(j)).rowwise().norm();
    }
    return d;
}

Eigen::MatrixXd kernel_matrix(const Mat2x& a, const Mat2x& b, const KernelParams& k,
                              Eigen::MatrixXd* dist_out) {
    Eigen::MatrixXd d = pairwise_distances(a, b);
    Eigen::MatrixXd km = k.signal_var() * (-d / k.lengthscale()).array().exp().matrix();
    if (dist_out) *dist_out = std::move(d);
    return km;
}

}  // namespace bathyslam
