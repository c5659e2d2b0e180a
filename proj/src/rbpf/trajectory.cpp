#include "bathyslam/rbpf/trajectory.hpp"

#include <algorithm>
#include <string>

#include "bathyslam/core/errors.hpp"

namespace bathyslam {

void TrajectoryHistory::append(const Pose& pose) {
    if (!empty() && pose.t <= last_timestamp()) {
        throw OrderingError("TrajectoryHistory::append: timestamp " + std::to_string(pose.t) +
                            " not after " + std::to_string(last_timestamp()));
    }
    tail_.poses.push_back(pose);
}

std::size_t TrajectoryHistory::pose_count() const {
    std::size_t n = tail_.poses.size();
    for (const auto& seg : sealed_) n += seg->poses.size();
    return n;
}

double TrajectoryHistory::first_timestamp() const {
    if (!sealed_.empty()) return sealed_.front()->poses.front().t;
    if (!tail_.poses.empty()) return tail_.poses.front().t;
    throw OutOfRangeError("TrajectoryHistory::first_timestamp: empty history");
}

double TrajectoryHistory::last_timestamp() const { return last_pose().t; }

const Pose& TrajectoryHistory::last_pose() const {
    if (!tail_.poses.empty()) return tail_.poses.back();
    if (!sealed_.empty()) return sealed_.back()->poses.back();
    throw OutOfRangeError("TrajectoryHistory::last_pose: empty history");
}

SegmentHandle TrajectoryHistory::seal_tail() {
    if (tail_.poses.empty()) return nullptr;
    auto segment = std::make_shared<TrajectorySegment>(std::move(tail_));
    segment->sealed = true;
    tail_ = TrajectorySegment{};
    sealed_.push_back(segment);
    return sealed_.back();
}

void TrajectoryHistory::adopt_lineage(std::vector<SegmentHandle> segments) {
    if (!tail_.poses.empty()) {
        throw OrderingError("adopt_lineage: open tail is not empty");
    }
    sealed_ = std::move(segments);
}

std::vector<Pose> TrajectoryHistory::materialize() const {
    std::vector<Pose> out;
    out.reserve(pose_count());
    for_each_pose([&out](const Pose& p) { out.push_back(p); });
    return out;
}

std::size_t SegmentIndex::total_poses() const {
    std::size_t n = 0;
    for (std::size_t len : lengths) n += len;
    return n;
}

void SegmentIndex::append(double segment_start, std::size_t length) {
    if (!start_t.empty() && segment_start <= start_t.back()) {
        throw OrderingError("SegmentIndex::append: segment start not increasing");
    }
    start_t.push_back(segment_start);
    lengths.push_back(length);
}

std::size_t SegmentIndex::find_segment(double t) const {
    const auto it = std::upper_bound(start_t.begin(), start_t.end(), t);
    if (it == start_t.begin()) {
        throw OutOfRangeError("SegmentIndex::find_segment: t precedes first segment");
    }
    return static_cast<std::size_t>(std::distance(start_t.begin(), it)) - 1;
}

namespace {

// Greatest pose with timestamp <= t within one segment.
const Pose& hold_pose(const std::vector<Pose>& poses, double t) {
    const auto it = std::upper_bound(poses.begin(), poses.end(), t,
                                     [](double v, const Pose& p) { return v < p.t; });
    if (it == poses.begin()) {
        throw OutOfRangeError("pose_at: timestamp precedes segment start");
    }
    return *(it - 1);
}

}  // namespace

Pose pose_at(const TrajectoryHistory& history, const SegmentIndex& index, double t_b) {
    if (history.empty()) throw OutOfRangeError("pose_at: empty history");
    if (t_b < history.first_timestamp()) {
        throw OutOfRangeError("pose_at: t=" + std::to_string(t_b) + " precedes first pose");
    }
    if (t_b > history.last_timestamp()) {
        throw OutOfRangeError("pose_at: t=" + std::to_string(t_b) + " past last pose");
    }

    const auto& tail = history.open_tail();
    if (!tail.poses.empty() && t_b >= tail.poses.front().t) {
        return hold_pose(tail.poses, t_b);
    }

    const std::size_t seg = index.find_segment(t_b);
    const auto& sealed = history.sealed_segments();
    if (seg >= sealed.size()) {
        throw OutOfRangeError("pose_at: segment index inconsistent with history");
    }
    return hold_pose(sealed[seg]->poses, t_b);
}

}  // namespace bathyslam
