#include "bathyslam/rbpf/runner.hpp"

#include <chrono>
#include <cmath>

#include "bathyslam/core/errors.hpp"

namespace bathyslam {

FilterRunner::FilterRunner(ParticleSet& set, BeamLog& log, SegmentIndex& index, RunnerConfig cfg)
    : set_(set), log_(log), index_(index), cfg_(cfg) {
    if (cfg_.step_iteration_budget < 0) {
        throw ConfigError("step iteration budget must be non-negative");
    }
    const auto j = static_cast<std::size_t>(set_.size());
    budgets_.assign(j, 0);
    weigh_deltas_.assign(j, 0.0);
    weigh_failed_.assign(j, 0);
    iterations_.assign(j, 0);
    workers_.reserve(static_cast<std::size_t>(set_.groups));
    for (int g = 0; g < set_.groups; ++g) {
        workers_.emplace_back([this, g] { worker_loop(g); });
    }
}

FilterRunner::~FilterRunner() {
    {
        std::lock_guard lk(mu_);
        phase_ = Phase::Stop;
        ++generation_;
    }
    cv_start_.notify_all();
    for (auto& w : workers_) w.join();
}

void FilterRunner::worker_loop(int group) {
    std::uint64_t seen = 0;
    for (;;) {
        Phase phase;
        {
            std::unique_lock lk(mu_);
            cv_start_.wait(lk, [&] { return generation_ > seen; });
            seen = generation_;
            phase = phase_;
        }
        if (phase == Phase::Stop) return;
        try {
            if (phase == Phase::Train) {
                train_group(group);
            } else {
                weigh_group(group);
            }
        } catch (...) {
            std::lock_guard lk(mu_);
            if (!worker_error_) worker_error_ = std::current_exception();
        }
        {
            std::lock_guard lk(mu_);
            if (++done_ == set_.groups) cv_done_.notify_one();
        }
    }
}

void FilterRunner::dispatch(Phase phase) {
    {
        std::lock_guard lk(mu_);
        phase_ = phase;
        done_ = 0;
        ++generation_;
    }
    cv_start_.notify_all();
    std::unique_lock lk(mu_);
    cv_done_.wait(lk, [&] { return done_ == set_.groups; });
    if (worker_error_) {
        auto err = worker_error_;
        worker_error_ = nullptr;
        std::rethrow_exception(err);
    }
}

void FilterRunner::train_group(int group) {
    const int b = set_.per_group();
    const int begin = group * b;
    for (int i = begin; i < begin + b; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        Particle& particle = set_.particles[idx];
        for (int it = 0; it < budgets_[idx]; ++it) {
            svgp_iteration(particle, log_, index_, cfg_.minibatch, cfg_.train, set_.rng[idx]);
            ++iterations_[idx];
        }
        if (budgets_[idx] > 0) convergence_check(particle.map, cfg_.convergence);
    }
}

void FilterRunner::weigh_group(int group) {
    const int b = set_.per_group();
    const int begin = group * b;
    for (int i = begin; i < begin + b; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        weigh_failed_[idx] = 0;
        try {
            weigh_deltas_[idx] = particle_log_weight(set_.particles[idx], *weigh_ping_,
                                                     set_.measurement_noise, cfg_.lc.k_w);
        } catch (const NumericalError&) {
            weigh_failed_[idx] = 1;
        }
    }
}

RunStats FilterRunner::run(const std::vector<SurveyStep>& steps,
                           const std::atomic<bool>* interrupt) {
    if (steps.empty()) throw DataError("run: empty mission");
    RunStats stats;
    const int j = set_.size();

    double next_lc_t =
        cfg_.slam && cfg_.lc_rate_hz > 0.0 ? steps.front().ping.t + 1.0 / cfg_.lc_rate_hz : 0.0;

    for (std::size_t k = 0; k < steps.size(); ++k) {
        if (interrupt && interrupt->load(std::memory_order_relaxed)) {
            stats.interrupted = true;
            break;
        }
        const SurveyStep& step = steps[k];

        if (k > 0) {
            const double dt = step.dr.t - steps[k - 1].dr.t;
            if (dt > 0.0) {
                const Pose& prev = steps[k - 1].dr;
                ControlInput control;
                control.t = step.dr.t;
                control.surge = (step.dr.position.head<2>() - prev.position.head<2>()).norm() / dt;
                control.yaw_rate = wrap_angle(step.dr.heading - prev.heading) / dt;
                predict(set_, control, dt, step.dr.position.z());
            }
        }
        log_.append_ping(step.ping);

        // Deterministic budget split with a rotating remainder.
        const int base = cfg_.step_iteration_budget / j;
        const int rem = cfg_.step_iteration_budget % j;
        for (int i = 0; i < j; ++i) {
            const int slot = static_cast<int>((static_cast<std::size_t>(i) + k) %
                                              static_cast<std::size_t>(j));
            budgets_[static_cast<std::size_t>(i)] = base + (slot < rem ? 1 : 0);
        }
        const auto t0 = std::chrono::steady_clock::now();
        dispatch(Phase::Train);
        stats.train_wall_seconds +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        if (cfg_.slam && cfg_.lc_rate_hz > 0.0 && step.ping.t >= next_lc_t - 1e-9) {
            bool all_converged = true;
            for (const Particle& p : set_.particles) all_converged &= p.map.converged;
            if (all_converged) {
                weigh_ping_ = &step.ping;
                dispatch(Phase::Weigh);
                stats.posterior_failures += combine_log_weights(set_, weigh_deltas_, weigh_failed_);
                const double ess = effective_sample_size(set_);

                WeightRecord wr;
                wr.t = step.ping.t;
                wr.weights.reserve(static_cast<std::size_t>(j));
                for (const Particle& p : set_.particles) wr.weights.push_back(p.weight);
                stats.weight_history.push_back(std::move(wr));

                const double half = static_cast<double>(j) / 2.0;
                const bool trigger = cfg_.lc.resample_when_ess_below_half ? (ess < half)
                                                                          : (ess > half);
                if (trigger) {
                    ResampleRecord rr;
                    rr.t = step.ping.t;
                    rr.ess = ess;
                    rr.offspring = resample(set_, index_, set_.filter_rng);
                    stats.resample_events.push_back(std::move(rr));
                }
                ++stats.lc_prompts;
                next_lc_t = step.ping.t + 1.0 / cfg_.lc_rate_hz;
            }
        }

        if (cfg_.pace_factor > 0.0 && k > 0) {
            const double dt = step.dr.t - steps[k - 1].dr.t;
            if (dt > 0.0) {
                std::this_thread::sleep_for(
                    std::chrono::duration<double>(dt * cfg_.pace_factor));
            }
        }
        ++stats.steps;
    }

    stats.iterations_per_particle = iterations_;
    for (std::uint64_t n : iterations_) stats.total_iterations += n;
    return stats;
}

}  // namespace bathyslam
