#ifndef BATHYSLAM_SVGP_CHECKPOINT_HPP
#define BATHYSLAM_SVGP_CHECKPOINT_HPP

#include <string>

#include "bathyslam/svgp/model.hpp"

namespace bathyslam {

// Self-describing JSON checkpoint: all trainable parameters, optimizer
// moments and step counter, the minibatch RNG stream state, the de-mean
// offset, and the convergence state. Doubles are serialized with shortest
// round-trip precision, so save -> load -> save is byte-identical. The elbo
// trace is not part of the checkpoint (it is dumped separately); a loaded
// model starts with an empty trace.

void save_checkpoint(const std::string& path, const SvgpModel& model,
                     const std::string& rng_state);

struct LoadedCheckpoint {
    SvgpModel model;
    std::string rng_state;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace bathyslam

#endif
