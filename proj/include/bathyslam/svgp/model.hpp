#ifndef BATHYSLAM_SVGP_MODEL_HPP
#define BATHYSLAM_SVGP_MODEL_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "bathyslam/core/rng.hpp"
#include "bathyslam/core/types.hpp"
#include "bathyslam/svgp/kernel.hpp"

namespace bathyslam {

// Inducing locations, one per row. Rows are kept pairwise separated by at
// least kMinSeparation; enforce_separation() nudges duplicates apart with a
// deterministic displacement.
struct InducingSet {
    static constexpr double kMinSeparation = 1e-6;  // meters

    Mat2x Z;

    int size() const { return static_cast<int>(Z.rows()); }
    void enforce_separation();
};

// S locations on a jittered regular grid covering the rectangle: a
// ceil(sqrt(S)) x ceil(sqrt(S)) cell grid, one uniformly jittered point per
// cell in row-major order until S points are placed.
InducingSet init_inducing_uniform(const Rect& bounds, int count, RngStream& rng);

// q(u) = N(mu, L L^T), L lower triangular with positive diagonal.
struct VariationalDist {
    Eigen::VectorXd mu;
    Eigen::MatrixXd L;

    int size() const { return static_cast<int>(mu.size()); }
    Eigen::MatrixXd sigma() const { return L * L.transpose(); }
};

struct AdamState {
    Eigen::VectorXd m;  // first moments
    Eigen::VectorXd v;  // second moments
    std::int64_t step = 0;
    int consecutive_skips = 0;
    std::int64_t total_skips = 0;
};

struct SvgpModel {
    KernelParams kernel;
    InducingSet inducing;
    VariationalDist variational;
    AdamState optimizer_state;

    // One (iteration, elbo) entry per optimizer step, plus the matching
    // exponential moving average maintained by convergence_check.
    std::vector<std::pair<std::int64_t, double>> elbo_trace;
    std::vector<double> ema_trace;
    bool converged = false;  // sticky once raised

    // Depth datum subtracted from training targets; predictions are relative
    // to it.
    double mean_offset = 0.0;

    int inducing_count() const { return inducing.size(); }
    // Full trainable parameter count: 3 hypers + 2S inducing coordinates +
    // S variational means + S(S+1)/2 factor entries.
    int param_count() const {
        const int s = inducing_count();
        return 3 + 2 * s + s + s * (s + 1) / 2;
    }
};

// Fresh model over a survey area: hypers from the area scale and the first
// depths (lengthscale = diagonal/20, signal variance = var(depths) floored at
// 1, noise 0.1 m^2), mu = 0, L = chol(Kss + jitter) so the initial KL is zero.
SvgpModel make_model(const Rect& survey_area, int inducing_count,
                     const std::vector<double>& first_depths, double mean_offset,
                     RngStream& rng);

// Marginal posterior at query points.
struct PosteriorPrediction {
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;       // clamped at kVarianceFloor
    double min_raw_variance = 0.0;  // diagnostic: smallest pre-clamp value
    static constexpr double kVarianceFloor = 1e-9;
};

}  // namespace bathyslam

#endif
