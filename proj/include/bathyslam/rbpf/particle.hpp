#ifndef BATHYSLAM_RBPF_PARTICLE_HPP
#define BATHYSLAM_RBPF_PARTICLE_HPP

#include <vector>

#include "bathyslam/core/rng.hpp"
#include "bathyslam/core/types.hpp"
#include "bathyslam/rbpf/trajectory.hpp"
#include "bathyslam/svgp/model.hpp"

namespace bathyslam {

struct Particle {
    Pose pose;
    TrajectoryHistory history;
    SvgpModel map;
    double weight = 1.0;      // normalized
    double log_weight = 0.0;  // accumulated between loop-closure prompts
    int id = 0;
};

// Diagonal motion-noise power spectral densities: variance accumulated per
// second of prediction, [m^2/s, m^2/s, m^2/s, rad^2/s] for x, y, z, yaw.
struct MotionNoise {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double yaw = 0.0;
};

struct ParticleSet {
    std::vector<Particle> particles;
    MotionNoise motion_noise;      // W
    double measurement_noise = 1.0;  // Q, m^2
    int groups = 1;                // B; must divide J
    std::vector<RngStream> rng;    // one stream per particle slot
    RngStream filter_rng;          // resampling comb offset

    int size() const { return static_cast<int>(particles.size()); }
    int per_group() const { return size() / groups; }
};

// J particles at a common start pose, each with its own copy of the prototype
// map and a slot-derived rng stream. Throws ConfigError unless B divides J.
ParticleSet make_particle_set(int count, int groups, const Pose& start,
                              const SvgpModel& prototype_map, const MotionNoise& noise,
                              double measurement_noise, std::uint64_t seed);

}  // namespace bathyslam

#endif
