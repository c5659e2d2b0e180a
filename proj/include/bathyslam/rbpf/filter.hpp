#ifndef BATHYSLAM_RBPF_FILTER_HPP
#define BATHYSLAM_RBPF_FILTER_HPP

#include <optional>
#include <vector>

#include "bathyslam/core/beam_log.hpp"
#include "bathyslam/rbpf/particle.hpp"
#include "bathyslam/svgp/optimizer.hpp"

namespace bathyslam {

// Propagates every particle one step with the unicycle model plus zero-mean
// Gaussian noise of covariance W * dt drawn from the particle's own stream,
// and appends the new pose (timestamped control.t) to its open tail. z
// follows the DR input when provided, otherwise integrates noise only.
void predict(ParticleSet& set, const ControlInput& control, double dt,
             std::optional<double> dr_z = std::nullopt);

// Algorithm: sample (beam, t_b) pairs from the log, look the particle's pose
// up at t_b, re-project the beam under it, de-mean the depth.
void build_minibatch(const Particle& particle, const BeamLog& log, const SegmentIndex& index,
                     std::size_t count, RngStream& rng, std::vector<TrainingPoint>& out);

// One training iteration: build_minibatch followed by one optimizer step with
// the current log size as the dataset count.
void svgp_iteration(Particle& particle, const BeamLog& log, const SegmentIndex& index,
                    std::size_t minibatch, const TrainOptions& opts, RngStream& rng);

// Sum over an evenly spaced subsample of at most k_w beams of the Gaussian
// log-density of the observed (de-meaned) depth under the particle's
// posterior with variance inflated by Q. Throws NumericalError on posterior
// failure.
double particle_log_weight(const Particle& particle, const Ping& ping, double q, int k_w);

// Accumulates per-particle log-weights for the ping and renormalizes across
// the set. Requires every map's converged flag (the loop-closure gate); a
// particle whose posterior fails receives the minimum weight in the set.
// Returns the number of posterior failures.
int weigh_particles(ParticleSet& set, const Ping& ping, int k_w);

// Applies per-particle log-weight increments (failed entries get the minimum
// resulting weight) and renormalizes. Shared by weigh_particles and the
// parallel runner. Returns the failure count; throws if every entry failed.
int combine_log_weights(ParticleSet& set, const std::vector<double>& deltas,
                        const std::vector<char>& failed);

// Refreshes normalized weights from the accumulated log-weights (log-sum-exp).
void normalize_weights(ParticleSet& set);

double effective_sample_size(const ParticleSet& set);

// Systematic resampling: one uniform offset u0 in [0, 1/J) and comb positions
// u0 + k/J over the weight CDF. Survivors seal their open tails (recorded
// once in the segment index); offspring adopt the survivor's handle sequence,
// copy its map including optimizer state, and weights reset to 1/J.
// Returns per-parent offspring counts.
std::vector<int> resample(ParticleSet& set, SegmentIndex& index, RngStream& rng);

struct LcConfig {
    int k_w = 32;
    bool resample_when_ess_below_half = true;
};

struct LcEvent {
    bool gated = false;      // true when skipped because a map had not converged
    double ess = 0.0;
    bool resampled = false;
    std::vector<int> offspring;       // empty unless resampled
    std::vector<double> weights;      // normalized weights after the pass
    int posterior_failures = 0;
};

// Loop-closure prompt: no-op unless every SVGP has converged; otherwise weigh
// against the ping and resample iff the ESS criterion fires (weights are
// retained for the next prompt when it does not).
LcEvent lc_prompting(ParticleSet& set, SegmentIndex& index, const Ping& ping,
                     const LcConfig& cfg);

// Per-timestamp mean of the particle histories: arithmetic over positions,
// circular over yaw.
std::vector<Pose> estimate_trajectory(const ParticleSet& set, const SegmentIndex& index);

}  // namespace bathyslam

#endif
