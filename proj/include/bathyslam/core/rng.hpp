#ifndef BATHYSLAM_CORE_RNG_HPP
#define BATHYSLAM_CORE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>

namespace bathyslam {

// Deterministic random stream. The raw engine is std::mt19937_64; uniform and
// normal variates are produced with fixed algorithms (not the standard-library
// distributions, whose draw sequences are implementation-defined) so that a
// seed pins the exact sequence and the state can be serialized verbatim.
class RngStream {
public:
    RngStream() : engine_(0) {}
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform index in [0, n). Modulo bias is below n / 2^64.
    std::uint64_t uniform_index(std::uint64_t n) { return engine_() % n; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller; consumes exactly two engine draws.
    double normal() {
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    std::string save_state() const {
        std::ostringstream os;
        os << engine_;
        return os.str();
    }

    void load_state(const std::string& state) {
        std::istringstream is(state);
        is >> engine_;
    }

    bool operator==(const RngStream& other) const { return engine_ == other.engine_; }

    // SplitMix64-style mixing for deriving independent child seeds.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t tag(const char* name) {
        // FNV-1a over the tag string.
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (const char* p = name; *p; ++p) {
            h = (h ^ static_cast<std::uint64_t>(*p)) * 0x100000001B3ULL;
        }
        return h;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace bathyslam

#endif
