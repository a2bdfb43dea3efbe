#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlcs/lindblad.hpp"
#include "nlcs/sweep.hpp"

namespace nlcs {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Everything the JSON config file can set. Keys: quantity, parity, eta_grid
/// or eta_min/eta_max/eta_count (log-spaced), omega_ratio (number or array),
/// dim, gamma, recoil, output. Unknown keys are rejected.
struct SweepConfig {
    SweepSpec spec;
    std::vector<double> ratios;  // spec.omega_ratio mirrors ratios.front()
    double gamma = 0.1;
    RecoilKind recoil = RecoilKind::none;
};

inline SweepQuantity quantity_from_string(const std::string& s) {
    if (s == "delta_p_sq") return SweepQuantity::delta_p_sq;
    if (s == "mandel_q") return SweepQuantity::mandel_q;
    if (s == "pn") return SweepQuantity::pn;
    throw ConfigError("unknown quantity '" + s + "'");
}

inline Parity parity_from_string(const std::string& s) {
    if (s == "even") return Parity::even;
    if (s == "odd") return Parity::odd;
    throw ConfigError("unknown parity '" + s + "'");
}

inline RecoilKind recoil_from_string(const std::string& s) {
    if (s == "none") return RecoilKind::none;
    if (s == "isotropic") return RecoilKind::isotropic;
    if (s == "dipole") return RecoilKind::dipole;
    throw ConfigError("unknown recoil '" + s + "'");
}

inline SweepConfig parse_sweep_config(const nlohmann::json& j, SweepConfig base) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    static const std::vector<std::string> known = {"quantity", "parity",    "eta_grid", "eta_min",
                                                   "eta_max",  "eta_count", "omega_ratio", "dim",
                                                   "gamma",    "recoil",    "output"};
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const auto& k : known) ok = ok || (k == key);
        if (!ok) throw ConfigError("unknown config key '" + key + "'");
    }
    try {
        if (j.contains("quantity")) base.spec.quantity = quantity_from_string(j.at("quantity"));
        if (j.contains("parity")) base.spec.parity = parity_from_string(j.at("parity"));
        if (j.contains("eta_grid")) {
            base.spec.eta_grid = j.at("eta_grid").get<std::vector<double>>();
            if (j.contains("eta_min") || j.contains("eta_max") || j.contains("eta_count"))
                throw ConfigError("give either eta_grid or eta_min/eta_max/eta_count, not both");
        } else if (j.contains("eta_min") || j.contains("eta_max") || j.contains("eta_count")) {
            if (!(j.contains("eta_min") && j.contains("eta_max") && j.contains("eta_count")))
                throw ConfigError("eta range needs eta_min, eta_max and eta_count together");
            base.spec.eta_grid = log_spaced(j.at("eta_min").get<double>(), j.at("eta_max").get<double>(),
                                            j.at("eta_count").get<int>());
        }
        if (j.contains("omega_ratio")) {
            const auto& r = j.at("omega_ratio");
            if (r.is_array())
                base.ratios = r.get<std::vector<double>>();
            else
                base.ratios = {r.get<double>()};
            if (base.ratios.empty()) throw ConfigError("omega_ratio array must not be empty");
            base.spec.omega_ratio = base.ratios.front();
        }
        if (j.contains("dim")) base.spec.dim = j.at("dim").get<int>();
        if (j.contains("gamma")) base.gamma = j.at("gamma").get<double>();
        if (j.contains("recoil")) base.recoil = recoil_from_string(j.at("recoil"));
        if (j.contains("output")) base.spec.output_path = j.at("output").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config value: ") + e.what());
    }
    return base;
}

inline SweepConfig load_sweep_config(const std::string& path, SweepConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_sweep_config(j, std::move(base));
}

}  // namespace nlcs
