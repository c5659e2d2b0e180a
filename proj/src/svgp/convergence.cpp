#include "bathyslam/svgp/convergence.hpp"

#include <cmath>
#include <cstddef>

#include "bathyslam/core/errors.hpp"

namespace bathyslam {

bool convergence_check(SvgpModel& model, const ConvergenceConfig& cfg) {
    if (cfg.window < 1) throw ConfigError("convergence_check: window must be >= 1");
    const double alpha = 2.0 / (static_cast<double>(cfg.window) + 1.0);

    // Extend the EMA to match the elbo trace.
    while (model.ema_trace.size() < model.elbo_trace.size()) {
        const double value = model.elbo_trace[model.ema_trace.size()].second;
        if (model.ema_trace.empty()) {
            model.ema_trace.push_back(value);
        } else {
            model.ema_trace.push_back(alpha * value + (1.0 - alpha) * model.ema_trace.back());
        }
    }

    const std::size_t n = model.ema_trace.size();
    const auto w = static_cast<std::size_t>(cfg.window);
    if (n < 2 * w) return model.converged;

    const double now = model.ema_trace[n - 1];
    const double before = model.ema_trace[n - 1 - w];
    const double change = std::abs(now - before) / (std::abs(now) + 1e-9);
    if (change < cfg.delta) model.converged = true;
    return model.converged;
}

}  // namespace bathyslam
