#ifndef BATHYSLAM_CORE_TYPES_HPP
#define BATHYSLAM_CORE_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

namespace bathyslam {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
// Point sets, one point per row.
using Mat2x = Eigen::Matrix<double, Eigen::Dynamic, 2>;

// Sign convention used everywhere: z is negative downwards, so seabed depths
// are negative numbers in both the vehicle and the map frame.

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    if (a > M_PI) a -= 2.0 * M_PI;
    return a;
}

// 4-DOF vehicle pose: position in the map frame plus yaw. Roll and pitch are
// fixed to zero.
struct Pose {
    double t = 0.0;
    Vec3 position = Vec3::Zero();
    double heading = 0.0;  // yaw, radians, in (-pi, pi]
};

struct ControlInput {
    double t = 0.0;
    double surge = 0.0;     // m/s
    double yaw_rate = 0.0;  // rad/s
};

// One MBES return in the vehicle frame at acquisition time.
struct Beam {
    Vec3 position = Vec3::Zero();
};

// One MBES ping: beams ordered port to starboard.
struct Ping {
    double t = 0.0;
    std::vector<Beam> beams;
};

struct TrainingPoint {
    Vec2 x = Vec2::Zero();
    double y = 0.0;  // depth, meters
};

// Axis-aligned rectangle in the map frame.
struct Rect {
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }
    double diagonal() const { return std::hypot(width(), height()); }
    bool contains(const Vec2& p) const {
        return p.x() >= xmin && p.x() <= xmax && p.y() >= ymin && p.y() <= ymax;
    }
};

// Rigid transform of a vehicle-frame beam into the map frame: rotate by the
// pose heading about the vertical axis, then translate.
inline Vec3 transform_beam(const Pose& pose, const Beam& beam) {
    const double c = std::cos(pose.heading);
    const double s = std::sin(pose.heading);
    const Vec3& b = beam.position;
    return Vec3(pose.position.x() + c * b.x() - s * b.y(),
                pose.position.y() + s * b.x() + c * b.y(),
                pose.position.z() + b.z());
}

// Inverse of transform_beam: map-frame point into the vehicle frame.
inline Vec3 map_to_vehicle(const Pose& pose, const Vec3& p) {
    const double c = std::cos(pose.heading);
    const double s = std::sin(pose.heading);
    const Vec3 d = p - pose.position;
    return Vec3(c * d.x() + s * d.y(), -s * d.x() + c * d.y(), d.z());
}

}  // namespace bathyslam

#endif
