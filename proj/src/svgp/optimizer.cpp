#include "bathyslam/svgp/optimizer.hpp"

#include <cmath>

#include "bathyslam/core/errors.hpp"

namespace bathyslam {

namespace {
constexpr int kMaxConsecutiveSkips = 10;
}

Eigen::VectorXd pack_params(const SvgpModel& model) {
    const int s = model.inducing_count();
    Eigen::VectorXd theta(model.param_count());
    theta(0) = model.kernel.log_signal_var;
    theta(1) = model.kernel.log_lengthscale;
    theta(2) = model.kernel.log_noise_var;
    int idx = 3;
    for (int i = 0; i < s; ++i) {
        theta(idx++) = model.inducing.Z(i, 0);
        theta(idx++) = model.inducing.Z(i, 1);
    }
    for (int i = 0; i < s; ++i) theta(idx++) = model.variational.mu(i);
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j <= i; ++j) theta(idx++) = model.variational.L(i, j);
    }
    return theta;
}

void unpack_params(SvgpModel& model, const Eigen::VectorXd& theta) {
    const int s = model.inducing_count();
    model.kernel.log_signal_var = theta(0);
    model.kernel.log_lengthscale = theta(1);
    model.kernel.log_noise_var = theta(2);
    int idx = 3;
    for (int i = 0; i < s; ++i) {
        model.inducing.Z(i, 0) = theta(idx++);
        model.inducing.Z(i, 1) = theta(idx++);
    }
    for (int i = 0; i < s; ++i) model.variational.mu(i) = theta(idx++);
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j <= i; ++j) model.variational.L(i, j) = theta(idx++);
    }
}

Eigen::VectorXd pack_gradients(const SvgpModel& model, const ElboGradients& grads) {
    const int s = model.inducing_count();
    Eigen::VectorXd g(model.param_count());
    g(0) = grads.log_signal_var;
    g(1) = grads.log_lengthscale;
    g(2) = grads.log_noise_var;
    int idx = 3;
    for (int i = 0; i < s; ++i) {
        g(idx++) = grads.Z(i, 0);
        g(idx++) = grads.Z(i, 1);
    }
    for (int i = 0; i < s; ++i) g(idx++) = grads.mu(i);
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j <= i; ++j) g(idx++) = grads.L(i, j);
    }
    return g;
}

void adam_update(AdamState& state, Eigen::VectorXd& params, const Eigen::VectorXd& grad,
                 const TrainOptions& opts) {
    state.step += 1;
    const auto t = static_cast<double>(state.step);
    state.m = opts.beta1 * state.m + (1.0 - opts.beta1) * grad;
    state.v = opts.beta2 * state.v.array().matrix() +
              (1.0 - opts.beta2) * grad.array().square().matrix();
    const double bc1 = 1.0 - std::pow(opts.beta1, t);
    const double bc2 = 1.0 - std::pow(opts.beta2, t);
    const Eigen::ArrayXd m_hat = state.m.array() / bc1;
    const Eigen::ArrayXd v_hat = state.v.array() / bc2;
    params.array() += opts.learning_rate * m_hat / (v_hat.sqrt() + opts.epsilon);
}

void optimizer_step(SvgpModel& model, const std::vector<TrainingPoint>& batch,
                    std::size_t total_count, const TrainOptions& opts) {
    GradBlocks blocks{opts.mask.kernel, opts.mask.inducing, opts.mask.variational};
    ElboGradients grads;
    const double elbo = elbo_minibatch(model, batch, total_count, &grads, blocks);

    Eigen::VectorXd g = pack_gradients(model, grads);
    if (!g.allFinite() || !std::isfinite(elbo)) {
        model.optimizer_state.consecutive_skips += 1;
        model.optimizer_state.total_skips += 1;
        if (model.optimizer_state.consecutive_skips >= kMaxConsecutiveSkips) {
            throw NumericalError("optimizer_step: " + std::to_string(kMaxConsecutiveSkips) +
                                 " consecutive non-finite gradients");
        }
        return;
    }
    model.optimizer_state.consecutive_skips = 0;

    Eigen::VectorXd theta = pack_params(model);
    adam_update(model.optimizer_state, theta, g, opts);

    // Frozen blocks keep their previous values.
    if (!opts.mask.kernel || !opts.mask.inducing || !opts.mask.variational) {
        const Eigen::VectorXd before = pack_params(model);
        const int s = model.inducing_count();
        if (!opts.mask.kernel) theta.segment(0, 3) = before.segment(0, 3);
        if (!opts.mask.inducing) theta.segment(3, 2 * s) = before.segment(3, 2 * s);
        if (!opts.mask.variational) {
            theta.tail(s + s * (s + 1) / 2) = before.tail(s + s * (s + 1) / 2);
        }
    }
    unpack_params(model, theta);

    for (int i = 0; i < model.inducing_count(); ++i) {
        if (model.variational.L(i, i) < kDiagFloor) model.variational.L(i, i) = kDiagFloor;
    }
    model.inducing.enforce_separation();

    model.elbo_trace.emplace_back(model.optimizer_state.step, elbo);
}

}  // namespace bathyslam
