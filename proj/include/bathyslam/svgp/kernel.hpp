#ifndef BATHYSLAM_SVGP_KERNEL_HPP
#define BATHYSLAM_SVGP_KERNEL_HPP

#include <cmath>

#include "bathyslam/core/types.hpp"

namespace bathyslam {

// Matern 1/2 hyperparameters plus the Gaussian observation noise, stored as
// logs so the optimizer works on unconstrained values.
struct KernelParams {
    double log_signal_var = 0.0;   // log sigma^2, sigma^2 in m^2
    double log_lengthscale = 0.0;  // log ell, ell in m
    double log_noise_var = 0.0;    // log sigma_n^2, sigma_n^2 in m^2

    double signal_var() const { return std::exp(log_signal_var); }
    double lengthscale() const { return std::exp(log_lengthscale); }
    double noise_var() const { return std::exp(log_noise_var); }
};

// k(a, b) = sigma^2 * exp(-|a - b| / ell)
inline double kernel_matern12(const Vec2& a, const Vec2& b, const KernelParams& k) {
    return k.signal_var() * std::exp(-(a - b).norm() / k.lengthscale());
}

// Pairwise Euclidean distances, one point per row.
Eigen::MatrixXd pairwise_distances(const Mat2x& a, const Mat2x& b);

// Kernel matrix K(a, b); when dist_out is non-null the distance matrix is
// stored there for reuse by gradient code.
Eigen::MatrixXd kernel_matrix(const Mat2x& a, const Mat2x& b, const KernelParams& k,
                              Eigen::MatrixXd* dist_out = nullptr);

}  // namespace bathyslam

#endif
