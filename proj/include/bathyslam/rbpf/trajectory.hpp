#ifndef BATHYSLAM_RBPF_TRAJECTORY_HPP
#define BATHYSLAM_RBPF_TRAJECTORY_HPP

#include <memory>
#include <vector>

#include "bathyslam/core/types.hpp"

namespace bathyslam {

// One stretch of a particle trajectory between resampling events. Sealed
// segments are immutable and shared between particles via handles.
struct TrajectorySegment {
    std::vector<Pose> poses;
    bool sealed = false;
};

using SegmentHandle = std::shared_ptr<const TrajectorySegment>;

// A particle's trajectory: shared handles to the sealed segments of its
// ancestry plus one open, owned tail. Copying a history copies handles and
// the tail, never sealed contents.
class TrajectoryHistory {
public:
    // Appends to the open tail; timestamps must be strictly increasing across
    // the whole history.
    void append(const Pose& pose);

    bool empty() const { return sealed_.empty() && tail_.poses.empty(); }
    std::size_t pose_count() const;
    double first_timestamp() const;
    double last_timestamp() const;
    const Pose& last_pose() const;

    const std::vector<SegmentHandle>& sealed_segments() const { return sealed_; }
    const TrajectorySegment& open_tail() const { return tail_; }
    bool tail_empty() const { return tail_.poses.empty(); }

    // Seals the open tail into a shared immutable segment and starts a fresh
    // tail. Returns nullptr when the tail is empty.
    SegmentHandle seal_tail();

    // Replaces the sealed-handle sequence (resampling offspring adopt the
    // survivor's lineage); the tail must be empty.
    void adopt_lineage(std::vector<SegmentHandle> segments);

    template <typename F>
    void for_each_pose(F&& f) const {
        for (const auto& seg : sealed_) {
            for (const Pose& p : seg->poses) f(p);
        }
        for (const Pose& p : tail_.poses) f(p);
    }

    // Full pose sequence, materialized. Intended for end-of-run averaging and
    // tests, not the training hot path.
    std::vector<Pose> materialize() const;

private:
    std::vector<SegmentHandle> sealed_;
    TrajectorySegment tail_;
};

// Segment boundary bookkeeping shared by every particle: start timestamp and
// length of each sealed segment, in order.
struct SegmentIndex {
    std::vector<double> start_t;
    std::vector<std::size_t> lengths;

    std::size_t segment_count() const { return start_t.size(); }
    std::size_t total_poses() const;
    void append(double segment_start, std::size_t length);
    // Greatest segment whose start timestamp is <= t; requires t >= start_t[0].
    std::size_t find_segment(double t) const;
};

// Pose lookup h(t_b): locate the sealed segment (or the open tail) containing
// t_b, then take the pose with the greatest timestamp <= t_b (zero-order
// hold). Throws OutOfRangeError when t_b precedes the first pose or lies past
// the last one.
Pose pose_at(const TrajectoryHistory& history, const SegmentIndex& index, double t_b);

}  // namespace bathyslam

#endif
