#ifndef BATHYSLAM_SIM_TERRAIN_HPP
#define BATHYSLAM_SIM_TERRAIN_HPP

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "bathyslam/core/types.hpp"

namespace bathyslam {

struct GaussianBump {
    Vec2 center = Vec2::Zero();
    double amplitude = 0.0;  // meters, signed
    double width = 1.0;      // meters, Gaussian sigma
};

// Seeded smooth random relief: per octave, a fixed number of cosine waves
// with random directions and phases; wavelength halves and amplitude halves
// per octave.
struct NoiseSpec {
    int octaves = 0;
    double base_wavelength = 50.0;  // meters
    double amplitude = 0.0;         // meters, per-octave bound at octave 0
    int components = 8;
    std::uint64_t seed = 0;
};

// Analytic ground-truth seabed: base plane (offset plus gradient) plus
// Gaussian bumps plus optional noise octaves. Height is continuous and
// deterministic given the seed; depths follow the global z-negative-down
// convention.
class TerrainField {
public:
    TerrainField(Rect bounds, double plane_offset, Vec2 plane_gradient,
                 std::vector<GaussianBump> bumps, NoiseSpec noise);

    TerrainField(const TerrainField& other);
    TerrainField& operator=(const TerrainField& other);

    // Height at x, clamped into the bounds (warns once on out-of-bounds).
    double height(const Vec2& x) const;

    const Rect& bounds() const { return bounds_; }
    double plane_offset() const { return offset_; }
    const Vec2& plane_gradient() const { return gradient_; }
    const std::vector<GaussianBump>& bumps() const { return bumps_; }
    const NoiseSpec& noise() const { return noise_; }

    // True when the surface is exactly the base plane, enabling closed-form
    // ray intersection.
    bool analytic_plane() const { return bumps_.empty() && waves_.empty(); }

    // Conservative lower bound on the height anywhere in bounds.
    double min_height_bound() const;

    static TerrainField from_json_file(const std::string& path);
    void to_json_file(const std::string& path) const;
    std::string to_json_string() const;
    static TerrainField from_json_string(const std::string& text);

private:
    void build_waves();

    Rect bounds_;
    double offset_;
    Vec2 gradient_;
    std::vector<GaussianBump> bumps_;
    NoiseSpec noise_;

    struct Wave {
        Vec2 k;
        double phase;
        double amp;
    };
    std::vector<Wave> waves_;
    mutable std::atomic<bool> warned_{false};
};

// Operation form of TerrainField::height.
inline double terrain_height(const TerrainField& field, const Vec2& x) {
    return field.height(x);
}

}  // namespace bathyslam

#endif
