#ifndef BATHYSLAM_SVGP_CONVERGENCE_HPP
#define BATHYSLAM_SVGP_CONVERGENCE_HPP

#include "bathyslam/svgp/model.hpp"

namespace bathyslam {

struct ConvergenceConfig {
    int window = 50;      // W: EMA smoothing 2/(W+1) and comparison span
    double delta = 1e-3;  // relative EMA change threshold
};

// Maintains an exponential moving average over the elbo trace and raises the
// sticky converged flag once the EMA has moved by less than delta (relative)
// over the last `window` steps. The flag never clears and training continues
// regardless; it only gates loop-closure prompting. Requires at least 2W
// trace entries before it can fire. Returns the flag.
bool convergence_check(SvgpModel& model, const ConvergenceConfig& cfg);

}  // namespace bathyslam

#endif
