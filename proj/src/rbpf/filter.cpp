#include "bathyslam/rbpf/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bathyslam/core/errors.hpp"
#include "bathyslam/svgp/elbo.hpp"

namespace bathyslam {

ParticleSet make_particle_set(int count, int groups, const Pose& start,
                              const SvgpModel& prototype_map, const MotionNoise& noise,
                              double measurement_noise, std::uint64_t seed) {
    if (count < 1) throw ConfigError("particle count must be >= 1");
    if (groups < 1 || count % groups != 0) {
        throw ConfigError("group count must divide the particle count");
    }
    ParticleSet set;
    set.motion_noise = noise;
    set.measurement_noise = measurement_noise;
    set.groups = groups;
    set.filter_rng = RngStream(RngStream::derive(seed, RngStream::tag("filter")));
    set.particles.resize(static_cast<std::size_t>(count));
    set.rng.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        Particle& p = set.particles[static_cast<std::size_t>(j)];
        p.id = j;
        p.pose = start;
        p.history.append(start);
        p.map = prototype_map;
        p.weight = 1.0 / count;
        p.log_weight = 0.0;
        set.rng.emplace_back(RngStream::derive(seed, RngStream::tag("particle") ^
                                                         static_cast<std::uint64_t>(j)));
    }
    return set;
}

void predict(ParticleSet& set, const ControlInput& control, double dt,
             std::optional<double> dr_z) {
    if (!(dt > 0.0)) throw DataError("predict: dt must be positive");
    const MotionNoise& w = set.motion_noise;
    const double sx = std::sqrt(w.x * dt);
    const double sy = std::sqrt(w.y * dt);
    const double sz = std::sqrt(w.z * dt);
    const double syaw = std::sqrt(w.yaw * dt);
    for (std::size_t j = 0; j < set.particles.size(); ++j) {
        Particle& p = set.particles[j];
        RngStream& rng = set.rng[j];
        const double nx = sx * rng.normal();
        const double ny = sy * rng.normal();
        const double nz = sz * rng.normal();
        const double nyaw = syaw * rng.normal();

        Pose next = p.pose;
        next.t = control.t;
        next.position.x() += control.surge * dt * std::cos(p.pose.heading) + nx;
        next.position.y() += control.surge * dt * std::sin(p.pose.heading) + ny;
        next.position.z() = (dr_z ? *dr_z : p.pose.position.z()) + nz;
        next.heading = wrap_angle(p.pose.heading + control.yaw_rate * dt + nyaw);

        p.pose = next;
        p.history.append(next);
    }
}

void build_minibatch(const Particle& particle, const BeamLog& log, const SegmentIndex& index,
                     std::size_t count, RngStream& rng, std::vector<TrainingPoint>& out) {
    thread_local std::vector<BeamRecord> records;
    log.sample_uniform(count, rng, records);
    out.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Pose pose = pose_at(particle.history, index, records[i].t);
        const Vec3 p_map = transform_beam(pose, records[i].beam);
        out[i].x = p_map.head<2>();
        out[i].y = p_map.z() - particle.map.mean_offset;
    }
}

void svgp_iteration(Particle& particle, const BeamLog& log, const SegmentIndex& index,
                    std::size_t minibatch, const TrainOptions& opts, RngStream& rng) {
    thread_local std::vector<TrainingPoint> batch;
    build_minibatch(particle, log, index, minibatch, rng, batch);
    optimizer_step(particle.map, batch, log.size(), opts);
}

double particle_log_weight(const Particle& particle, const Ping& ping, double q, int k_w) {
    const auto n = static_cast<int>(ping.beams.size());
    if (n == 0) throw DataError("particle_log_weight: empty ping");
    const int used = std::min(k_w, n);

    Mat2x queries(used, 2);
    Eigen::VectorXd observed(used);
    for (int k = 0; k < used; ++k) {
        // Evenly spaced across the swath.
        const int idx = static_cast<int>((static_cast<double>(k) + 0.5) * n / used);
        const Beam& beam = ping.beams[static_cast<std::size_t>(std::min(idx, n - 1))];
        const Vec3 p_map = transform_beam(particle.pose, beam);
        queries.row(k) = p_map.head<2>().transpose();
        observed(k) = p_map.z() - particle.map.mean_offset;
    }

    const PosteriorPrediction pred = posterior(particle.map, queries);
    double log_w = 0.0;
    for (int k = 0; k < used; ++k) {
        const double s = pred.variance(k) + q;
        const double r = observed(k) - pred.mean(k);
        log_w += -0.5 * std::log(2.0 * M_PI * s) - r * r / (2.0 * s);
    }
    return log_w;
}

int weigh_particles(ParticleSet& set, const Ping& ping, int k_w) {
    for (const Particle& p : set.particles) {
        if (!p.map.converged) {
            throw std::logic_error("weigh_particles: called before every SVGP converged");
        }
    }
    const std::size_t j = set.particles.size();
    std::vector<double> deltas(j, 0.0);
    std::vector<char> failed(j, 0);
    for (std::size_t i = 0; i < j; ++i) {
        try {
            deltas[i] = particle_log_weight(set.particles[i], ping, set.measurement_noise, k_w);
        } catch (const NumericalError&) {
            failed[i] = 1;
        }
    }
    return combine_log_weights(set, deltas, failed);
}

int combine_log_weights(ParticleSet& set, const std::vector<double>& deltas,
                        const std::vector<char>& failed) {
    const std::size_t j = set.particles.size();
    int failures = 0;
    for (std::size_t i = 0; i < j; ++i) {
        if (failed[i]) {
            ++failures;
        } else {
            set.particles[i].log_weight += deltas[i];
        }
    }
    if (failures == static_cast<int>(j)) {
        throw NumericalError("weigh_particles: posterior failed for every particle");
    }
    if (failures > 0) {
        double min_lw = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < j; ++i) {
            if (!failed[i]) min_lw = std::min(min_lw, set.particles[i].log_weight);
        }
        for (std::size_t i = 0; i < j; ++i) {
            if (failed[i]) set.particles[i].log_weight = min_lw;
        }
    }
    normalize_weights(set);
    return failures;
}

void normalize_weights(ParticleSet& set) {
    double max_lw = -std::numeric_limits<double>::infinity();
    for (const Particle& p : set.particles) max_lw = std::max(max_lw, p.log_weight);
    double sum = 0.0;
    for (Particle& p : set.particles) {
        p.weight = std::exp(p.log_weight - max_lw);
        sum += p.weight;
    }
    for (Particle& p : set.particles) p.weight /= sum;
}

double effective_sample_size(const ParticleSet& set) {
    double sq = 0.0;
    for (const Particle& p : set.particles) sq += p.weight * p.weight;
    return 1.0 / sq;
}

std::vector<int> resample(ParticleSet& set, SegmentIndex& index, RngStream& rng) {
    const int j = set.size();
    const double u0 = rng.uniform01() / j;

    std::vector<int> counts(static_cast<std::size_t>(j), 0);
    {
        double cumulative = set.particles[0].weight;
        int parent = 0;
        for (int k = 0; k < j; ++k) {
            const double position = u0 + static_cast<double>(k) / j;
            while (position >= cumulative && parent + 1 < j) {
                ++parent;
                cumulative += set.particles[static_cast<std::size_t>(parent)].weight;
            }
            ++counts[static_cast<std::size_t>(parent)];
        }
    }

    // All particles receive poses at the same timestamps, so every open tail
    // has the same span; one index entry covers the sealed generation.
    const bool new_segment = !set.particles[0].history.tail_empty();
    if (new_segment) {
        index.append(set.particles[0].history.open_tail().poses.front().t,
                     set.particles[0].history.open_tail().poses.size());
    }

    std::vector<SegmentHandle> sealed_tail(static_cast<std::size_t>(j));
    for (int p = 0; p < j; ++p) {
        if (counts[static_cast<std::size_t>(p)] > 0 && new_segment) {
            sealed_tail[static_cast<std::size_t>(p)] =
                set.particles[static_cast<std::size_t>(p)].history.seal_tail();
        }
    }

    std::vector<Particle> next;
    next.reserve(static_cast<std::size_t>(j));
    for (int p = 0; p < j; ++p) {
        for (int c = 0; c < counts[static_cast<std::size_t>(p)]; ++c) {
            const Particle& parent = set.particles[static_cast<std::size_t>(p)];
            Particle child;
            child.id = static_cast<int>(next.size());
            child.pose = parent.pose;
            child.map = parent.map;             // includes optimizer state
            child.weight = 1.0 / j;
            child.log_weight = 0.0;
            child.history.adopt_lineage(parent.history.sealed_segments());
            next.push_back(std::move(child));
        }
    }
    set.particles = std::move(next);
    return counts;
}

LcEvent lc_prompting(ParticleSet& set, SegmentIndex& index, const Ping& ping,
                     const LcConfig& cfg) {
    LcEvent event;
    for (const Particle& p : set.particles) {
        if (!p.map.converged) {
            event.gated = true;
            return event;
        }
    }
    event.posterior_failures = weigh_particles(set, ping, cfg.k_w);
    event.ess = effective_sample_size(set);
    event.weights.reserve(set.particles.size());
    for (const Particle& p : set.particles) event.weights.push_back(p.weight);

    const double half = static_cast<double>(set.size()) / 2.0;
    const bool trigger =
        cfg.resample_when_ess_below_half ? (event.ess < half) : (event.ess > half);
    if (trigger) {
        event.offspring = resample(set, index, set.filter_rng);
        event.resampled = true;
    }
    return event;
}

std::vector<Pose> estimate_trajectory(const ParticleSet& set, const SegmentIndex&) {
    if (set.particles.empty()) throw DataError("estimate_trajectory: no particles");
    std::vector<std::vector<Pose>> all;
    all.reserve(set.particles.size());
    for (const Particle& p : set.particles) all.push_back(p.history.materialize());
    const std::size_t n = all.front().size();
    for (const auto& traj : all) {
        if (traj.size() != n) {
            throw DataError("estimate_trajectory: histories not time-aligned");
        }
    }

    std::vector<Pose> mean(n);
    const double inv_j = 1.0 / static_cast<double>(all.size());
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 pos = Vec3::Zero();
        double sin_sum = 0.0;
        double cos_sum = 0.0;
        for (const auto& traj : all) {
            pos += traj[i].position;
            sin_sum += std::sin(traj[i].heading);
            cos_sum += std::cos(traj[i].heading);
        }
        mean[i].t = all.front()[i].t;
        mean[i].position = pos * inv_j;
        mean[i].heading = wrap_angle(std::atan2(sin_sum, cos_sum));
    }
    return mean;
}

}  // namespace bathyslam
