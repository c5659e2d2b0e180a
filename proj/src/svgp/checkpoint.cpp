#include "bathyslam/svgp/checkpoint.hpp"

#include <fstream>
#include <json.hpp>
#include <vector>

#include "bathyslam/core/errors.hpp"

namespace bathyslam {

namespace {
using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i];
    return v;
}
}  // namespace

void save_checkpoint(const std::string& path, const SvgpModel& model,
                     const std::string& rng_state) {
    const int s = model.inducing_count();
    json j;
    j["format"] = "bathyslam-svgp-checkpoint";
    j["version"] = 1;
    j["kernel"] = {{"log_signal_var", model.kernel.log_signal_var},
                   {"log_lengthscale", model.kernel.log_lengthscale},
                   {"log_noise_var", model.kernel.log_noise_var}};
    json z = json::array();
    for (int i = 0; i < s; ++i) z.push_back({model.inducing.Z(i, 0), model.inducing.Z(i, 1)});
    j["inducing"] = std::move(z);
    j["mu"] = vector_to_json(model.variational.mu);
    json l_lower = json::array();
    for (int i = 0; i < s; ++i) {
        for (int k = 0; k <= i; ++k) l_lower.push_back(model.variational.L(i, k));
    }
    j["L_lower"] = std::move(l_lower);
    j["adam"] = {{"m", vector_to_json(model.optimizer_state.m)},
                 {"v", vector_to_json(model.optimizer_state.v)},
                 {"step", model.optimizer_state.step},
                 {"consecutive_skips", model.optimizer_state.consecutive_skips},
                 {"total_skips", model.optimizer_state.total_skips}};
    j["converged"] = model.converged;
    j["mean_offset"] = model.mean_offset;
    j["rng_state"] = rng_state;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open checkpoint for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw DataError("checkpoint write failed: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("checkpoint parse error in " + path + ": " + e.what());
    }
    if (j.value("format", "") != std::string("bathyslam-svgp-checkpoint")) {
        throw DataError("not a model checkpoint: " + path);
    }

    LoadedCheckpoint loaded;
    SvgpModel& model = loaded.model;
    model.kernel.log_signal_var = j["kernel"]["log_signal_var"];
    model.kernel.log_lengthscale = j["kernel"]["log_lengthscale"];
    model.kernel.log_noise_var = j["kernel"]["log_noise_var"];

    const auto& z = j["inducing"];
    const int s = static_cast<int>(z.size());
    model.inducing.Z.resize(s, 2);
    for (int i = 0; i < s; ++i) {
        model.inducing.Z(i, 0) = z[static_cast<std::size_t>(i)][0];
        model.inducing.Z(i, 1) = z[static_cast<std::size_t>(i)][1];
    }
    model.variational.mu = vector_from_json(j["mu"]);
    model.variational.L = Eigen::MatrixXd::Zero(s, s);
    const auto& l_lower = j["L_lower"];
    std::size_t idx = 0;
    for (int i = 0; i < s; ++i) {
        for (int k = 0; k <= i; ++k) model.variational.L(i, k) = l_lower[idx++];
    }
    model.optimizer_state.m = vector_from_json(j["adam"]["m"]);
    model.optimizer_state.v = vector_from_json(j["adam"]["v"]);
    model.optimizer_state.step = j["adam"]["step"];
    model.optimizer_state.consecutive_skips = j["adam"]["consecutive_skips"];
    model.optimizer_state.total_skips = j["adam"]["total_skips"];
    model.converged = j["converged"];
    model.mean_offset = j["mean_offset"];
    loaded.rng_state = j["rng_state"];

    if (model.optimizer_state.m.size() != model.param_count()) {
        throw DataError("checkpoint moment size does not match parameter count: " + path);
    }
    return loaded;
}

}  // namespace bathyslam
