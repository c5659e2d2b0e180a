#ifndef BATHYSLAM_SVGP_ELBO_HPP
#define BATHYSLAM_SVGP_ELBO_HPP

#include <cstddef>
#include <vector>

#include "bathyslam/svgp/model.hpp"

namespace bathyslam {

// Gradients of the minibatch ELBO with respect to every trainable parameter.
// L holds the lower-triangular gradient; its upper triangle is zero.
struct ElboGradients {
    double log_signal_var = 0.0;
    double log_lengthscale = 0.0;
    double log_noise_var = 0.0;
    Mat2x Z;
    Eigen::VectorXd mu;
    Eigen::MatrixXd L;
};

// Selects which gradient blocks elbo_minibatch computes; skipped blocks are
// returned as zeros.
struct GradBlocks {
    bool kernel = true;
    bool inducing = true;
    bool variational = true;
};

// Minibatch evidence lower bound
//   L_hat = (N/M) * sum_i E_{q(f_i)}[ln p(y_i | f_i)] - KL[q(u) || p(u)]
// with the closed Gaussian form of the expected log-likelihood. K_ss carries
// a 1e-6 * sigma^2 diagonal jitter. With total_count == batch size this is
// exactly the full-batch bound. Throws NumericalError (with a condition
// estimate and the current lengthscale) if K_ss fails to factorize.
double elbo_minibatch(const SvgpModel& model, const std::vector<TrainingPoint>& batch,
                      std::size_t total_count, ElboGradients* grads = nullptr,
                      const GradBlocks& blocks = {});

// KL[q(u) || p(u)] on its own; zero iff mu = 0 and Sigma = K_ss (jittered).
double kl_to_prior(const SvgpModel& model);

// Sparse posterior at query locations (one row per query):
//   mean = K_*s K_ss^-1 mu
//   var  = diag[(K_*s K_ss^-1) Sigma (K_*s K_ss^-1)^T + K_** - K_*s K_ss^-1 K_*s^T]
// Observation noise is not added; callers add sigma_n^2 (or Q) themselves.
PosteriorPrediction posterior(const SvgpModel& model, const Mat2x& queries);

}  // namespace bathyslam

#endif
