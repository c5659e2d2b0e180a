#ifndef BATHYSLAM_CORE_BEAM_LOG_HPP
#define BATHYSLAM_CORE_BEAM_LOG_HPP

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "bathyslam/core/rng.hpp"
#include "bathyslam/core/types.hpp"

namespace bathyslam {

struct BeamRecord {
    Beam beam;               // vehicle frame at acquisition time
    double t = 0.0;          // ping timestamp
    std::uint32_t ping_index = 0;
};

// Append-only log of every beam collected so far, shared by all particles.
// Concurrency contract: a single writer appends pings; any number of readers
// may concurrently sample or read records below the published count. Storage
// is preallocated so reads never race with appends; a release store of the
// record count publishes fully written pings, and readers acquire it, so a
// partially appended ping is never visible.
class BeamLog {
public:
    struct PingSpan {
        double t = 0.0;
        std::size_t offset = 0;       // first record index
        std::uint32_t beam_count = 0;
    };

    explicit BeamLog(std::size_t beam_capacity, std::size_t ping_capacity = 0);

    // Writer side. Throws OrderingError if the ping timestamp precedes the log
    // tail, DataError on an empty ping or capacity overflow.
    void append_ping(const Ping& ping);

    // Reader side.
    std::size_t size() const { return published_beams_.load(std::memory_order_acquire); }
    std::size_t ping_count() const { return published_pings_.load(std::memory_order_acquire); }
    bool empty() const { return size() == 0; }
    std::size_t capacity() const { return beam_capacity_; }

    const BeamRecord& record(std::size_t i) const { return records_[i]; }
    const PingSpan& ping_span(std::size_t i) const { return pings_[i]; }

    // Timestamp of the last published record; requires a non-empty log.
    double last_timestamp() const;

    // Draw `count` records uniformly with replacement over everything
    // published at call time. Deterministic given the stream state. Throws
    // EmptyDatasetError on an empty log, DataError if count == 0.
    std::vector<BeamRecord> sample_uniform(std::size_t count, RngStream& rng) const;

    // Same draw, writing into a caller-provided buffer to avoid reallocation
    // in the training hot path.
    void sample_uniform(std::size_t count, RngStream& rng, std::vector<BeamRecord>& out) const;

private:
    std::unique_ptr<BeamRecord[]> records_;
    std::unique_ptr<PingSpan[]> pings_;
    std::size_t beam_capacity_;
    std::size_t ping_capacity_;
    std::atomic<std::size_t> published_beams_{0};
    std::atomic<std::size_t> published_pings_{0};
    double last_t_;  // writer-side only
};

// Appends a ping to the log (operation form of BeamLog::append_ping).
inline void append_ping(BeamLog& log, const Ping& ping) { log.append_ping(ping); }

}  // namespace bathyslam

#endif
