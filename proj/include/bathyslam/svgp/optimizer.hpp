#ifndef BATHYSLAM_SVGP_OPTIMIZER_HPP
#define BATHYSLAM_SVGP_OPTIMIZER_HPP

#include <cstddef>
#include <vector>

#include "bathyslam/svgp/elbo.hpp"
#include "bathyslam/svgp/model.hpp"

namespace bathyslam {

// Parameter blocks the optimizer is allowed to move. Frozen blocks also skip
// their gradient computation.
struct TrainMask {
    bool kernel = true;
    bool inducing = true;
    bool variational = true;
};

struct TrainOptions {
    double learning_rate = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    TrainMask mask;
};

// Flat parameter order used by the optimizer and checkpoints:
// [log_signal_var, log_lengthscale, log_noise_var,
//  Z row-major (2S), mu (S), L lower triangle row-major (S(S+1)/2)].
Eigen::VectorXd pack_params(const SvgpModel& model);
void unpack_params(SvgpModel& model, const Eigen::VectorXd& theta);
Eigen::VectorXd pack_gradients(const SvgpModel& model, const ElboGradients& grads);

// One bias-corrected Adam ascent step on params in place.
void adam_update(AdamState& state, Eigen::VectorXd& params, const Eigen::VectorXd& grad,
                 const TrainOptions& opts);

// One ELBO ascent step on the model: evaluates the minibatch ELBO and its
// gradients, applies Adam, re-enforces the inducing-separation and
// L-diagonal-floor invariants, and appends to the elbo trace. A non-finite
// gradient skips the step; ten consecutive skips raise NumericalError.
void optimizer_step(SvgpModel& model, const std::vector<TrainingPoint>& batch,
                    std::size_t total_count, const TrainOptions& opts = {});

constexpr double kDiagFloor = 1e-8;

}  // namespace bathyslam

#endif
