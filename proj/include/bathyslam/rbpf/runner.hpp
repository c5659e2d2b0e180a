#ifndef BATHYSLAM_RBPF_RUNNER_HPP
#define BATHYSLAM_RBPF_RUNNER_HPP

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "bathyslam/core/beam_log.hpp"
#include "bathyslam/core/survey_io.hpp"
#include "bathyslam/rbpf/filter.hpp"
#include "bathyslam/svgp/convergence.hpp"

namespace bathyslam {

struct RunnerConfig {
    std::size_t minibatch = 256;
    // Total SVGP iterations per mission step across the whole filter (the
    // hardware-capacity analog); split evenly over the J particles with a
    // rotating remainder. This makes the training schedule a function of the
    // config alone, so runs are reproducible: the B trainer threads change
    // wall-clock time, never results.
    int step_iteration_budget = 8;
    TrainOptions train;
    ConvergenceConfig convergence;
    bool slam = false;          // map-only mode never prompts
    double lc_rate_hz = 0.1;    // upper bound on executed prompt rate
    LcConfig lc;
    double pace_factor = 0.0;   // 0 = max throughput; else sleep factor * dt per step
};

struct WeightRecord {
    double t = 0.0;
    std::vector<double> weights;
};

struct ResampleRecord {
    double t = 0.0;
    double ess = 0.0;
    std::vector<int> offspring;
};

struct RunStats {
    std::size_t steps = 0;
    bool interrupted = false;
    std::vector<std::uint64_t> iterations_per_particle;
    std::uint64_t total_iterations = 0;
    double train_wall_seconds = 0.0;
    int lc_prompts = 0;
    int posterior_failures = 0;
    std::vector<WeightRecord> weight_history;
    std::vector<ResampleRecord> resample_events;
};

// Coordinator plus B trainer threads. The coordinator is the only writer of
// the beam log and the only issuer of predict/resample; both happen at step
// barriers while every trainer is idle. During a training phase each trainer
// exclusively owns its J/B particles and reads the log snapshot published
// before the phase started. Posterior queries for weighting run inside the
// owning trainer as well.
class FilterRunner {
public:
    FilterRunner(ParticleSet& set, BeamLog& log, SegmentIndex& index, RunnerConfig cfg);
    ~FilterRunner();

    FilterRunner(const FilterRunner&) = delete;
    FilterRunner& operator=(const FilterRunner&) = delete;

    // Feeds the mission through the filter. `interrupt` (optional) is polled
    // at step boundaries; the run drains cleanly and reports interrupted.
    RunStats run(const std::vector<SurveyStep>& steps,
                 const std::atomic<bool>* interrupt = nullptr);

private:
    enum class Phase { Train, Weigh, Stop };

    void worker_loop(int group);
    void dispatch(Phase phase);
    void train_group(int group);
    void weigh_group(int group);

    ParticleSet& set_;
    BeamLog& log_;
    SegmentIndex& index_;
    RunnerConfig cfg_;

    std::vector<std::thread> workers_;
    std::mutex mu_;
    std::condition_variable cv_start_;
    std::condition_variable cv_done_;
    std::uint64_t generation_ = 0;
    Phase phase_ = Phase::Train;
    int done_ = 0;
    std::exception_ptr worker_error_;

    std::vector<int> budgets_;             // per particle, current step
    const Ping* weigh_ping_ = nullptr;
    std::vector<double> weigh_deltas_;
    std::vector<char> weigh_failed_;
    std::vector<std::uint64_t> iterations_;
};

}  // namespace bathyslam

#endif
