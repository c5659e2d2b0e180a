#include "bathyslam/core/beam_log.hpp"

#include <limits>
#include <string>

#include "bathyslam/core/errors.hpp"

namespace bathyslam {

BeamLog::BeamLog(std::size_t beam_capacity, std::size_t ping_capacity)
    : beam_capacity_(beam_capacity),
      ping_capacity_(ping_capacity > 0 ? ping_capacity : beam_capacity),
      last_t_(-std::numeric_limits<double>::infinity()) {
    if (beam_capacity_ == 0) throw ConfigError("BeamLog capacity must be positive");
    records_ = std::make_unique<BeamRecord[]>(beam_capacity_);
    pings_ = std::make_unique<PingSpan[]>(ping_capacity_);
}

void BeamLog::append_ping(const Ping& ping) {
    if (ping.beams.empty()) throw DataError("append_ping: ping has no beams");
    if (ping.t < last_t_) {
        throw OrderingError("append_ping: ping at t=" + std::to_string(ping.t) +
                            " precedes log tail at t=" + std::to_string(last_t_));
    }
    const std::size_t n_beams = published_beams_.load(std::memory_order_relaxed);
    const std::size_t n_pings = published_pings_.load(std::memory_order_relaxed);
    if (n_beams + ping.beams.size() > beam_capacity_) {
        throw DataError("append_ping: beam log capacity exceeded (" +
                        std::to_string(beam_capacity_) + " records)");
    }
    if (n_pings + 1 > ping_capacity_) {
        throw DataError("append_ping: ping index capacity exceeded");
    }

    const auto ping_index = static_cast<std::uint32_t>(n_pings);
    for (std::size_t i = 0; i < ping.beams.size(); ++i) {
        records_[n_beams + i] = BeamRecord{ping.beams[i], ping.t, ping_index};
    }
    pings_[n_pings] = PingSpan{ping.t, n_beams, static_cast<std::uint32_t>(ping.beams.size())};
    last_t_ = ping.t;

    // Publish the ping and its records together.
    published_pings_.store(n_pings + 1, std::memory_order_release);
    published_beams_.store(n_beams + ping.beams.size(), std::memory_order_release);
}

double BeamLog::last_timestamp() const {
    const std::size_t n = size();
    if (n == 0) throw EmptyDatasetError("last_timestamp: beam log is empty");
    return records_[n - 1].t;
}

std::vector<BeamRecord> BeamLog::sample_uniform(std::size_t count, RngStream& rng) const {
    std::vector<BeamRecord> out;
    sample_uniform(count, rng, out);
    return out;
}

void BeamLog::sample_uniform(std::size_t count, RngStream& rng,
                             std::vector<BeamRecord>& out) const {
    const std::size_t n = size();
    if (n == 0) throw EmptyDatasetError("sample_uniform: beam log is empty");
    if (count == 0) throw DataError("sample_uniform: sample count must be >= 1");
    out.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = records_[rng.uniform_index(n)];
    }
}

}  // namespace bathyslam
