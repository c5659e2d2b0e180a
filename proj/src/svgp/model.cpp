#include "bathyslam/svgp/model.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "bathyslam/core/errors.hpp"

namespace bathyslam {

void InducingSet::enforce_separation() {
    const int s = size();
    // Deterministic golden-angle nudge for coincident rows.
    constexpr double kGolden = 2.39996322972865332;
    for (int i = 0; i < s; ++i) {
        for (int j = i + 1; j < s; ++j) {
            if ((Z.row(i) - Z.row(j)).norm() < kMinSeparation) {
                const double phi = kGolden * static_cast<double>(j + 1);
                Z(j, 0) += 2.0 * kMinSeparation * std::cos(phi);
                Z(j, 1) += 2.0 * kMinSeparation * std::sin(phi);
            }
        }
    }
}

InducingSet init_inducing_uniform(const Rect& bounds, int count, RngStream& rng) {
    if (count < 1) throw ConfigError("init_inducing_uniform: count must be >= 1");
    if (!(bounds.area() > 0.0)) {
        throw ConfigError("init_inducing_uniform: survey rectangle has no area");
    }
    const int grid = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
    const double cell_w = bounds.width() / grid;
    const double cell_h = bounds.height() / grid;

    InducingSet set;
    set.Z.resize(count, 2);
    int placed = 0;
    for (int row = 0; row < grid && placed < count; ++row) {
        for (int col = 0; col < grid && placed < count; ++col) {
            set.Z(placed, 0) = bounds.xmin + (col + rng.uniform01()) * cell_w;
            set.Z(placed, 1) = bounds.ymin + (row + rng.uniform01()) * cell_h;
            ++placed;
        }
    }
    set.enforce_separation();
    return set;
}

SvgpModel make_model(const Rect& survey_area, int inducing_count,
                     const std::vector<double>& first_depths, double mean_offset,
                     RngStream& rng) {
    SvgpModel model;
    model.mean_offset = mean_offset;

    double depth_var = 1.0;
    if (first_depths.size() > 1) {
        double mean = 0.0;
        for (double d : first_depths) mean += d;
        mean /= static_cast<double>(first_depths.size());
        double acc = 0.0;
        for (double d : first_depths) acc += (d - mean) * (d - mean);
        depth_var = acc / static_cast<double>(first_depths.size());
    }
    model.kernel.log_signal_var = std::log(std::max(depth_var, 1.0));
    model.kernel.log_lengthscale = std::log(survey_area.diagonal() / 20.0);
    model.kernel.log_noise_var = std::log(0.1);

    model.inducing = init_inducing_uniform(survey_area, inducing_count, rng);

    const int s = inducing_count;
    model.variational.mu = Eigen::VectorXd::Zero(s);
    Eigen::MatrixXd kss = kernel_matrix(model.inducing.Z, model.inducing.Z, model.kernel);
    kss.diagonal().array() += 1e-6 * model.kernel.signal_var();
    Eigen::LLT<Eigen::MatrixXd> llt(kss);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("make_model: initial inducing covariance not positive definite");
    }
    model.variational.L = llt.matrixL();

    const int p = model.param_count();
    model.optimizer_state.m = Eigen::VectorXd::Zero(p);
    model.optimizer_state.v = Eigen::VectorXd::Zero(p);
    return model;
}

}  // namespace bathyslam
