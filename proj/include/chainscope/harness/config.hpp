#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "chainscope/errors.hpp"

namespace chainscope::harness {

enum class Scenario { demo, truncation, coupling_disorder, eigenvalue_jitter, roundtrip };

inline std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::demo: return "demo";
        case Scenario::truncation: return "truncation";
        case Scenario::coupling_disorder: return "coupling-disorder";
        case Scenario::eigenvalue_jitter: return "eigenvalue-jitter";
        case Scenario::roundtrip: return "roundtrip";
    }
    return "unknown";
}

inline Scenario scenario_from_string(std::string_view name) {
    for (Scenario s : {Scenario::demo, Scenario::truncation, Scenario::coupling_disorder, Scenario::eigenvalue_jitter,
                       Scenario::roundtrip}) {
        if (to_string(s) == name) return s;
    }
    throw ValidationError("field 'scenario': unknown scenario '" + std::string(name) +
                          "' (expected demo, truncation, coupling-disorder, eigenvalue-jitter or roundtrip)");
}

/// Fully resolved run parameters. Field names match the config-file keys.
struct ExperimentConfig {
    Scenario scenario = Scenario::demo;
    std::size_t n_sites = 6;
    double j_low = 1.0;
    double j_high = 1.0;
    double delta = 0.0;
    std::vector<double> theta_list;
    std::vector<double> sigma_list;
    std::size_t n_samples = 2000;
    std::uint64_t base_seed = 0;
    double distance_tol = 0.05;
    std::string output_dir = "out";
    bool emit_plots = false;
    /// Ground-truth chains drawn per condition (coupling-disorder, eigenvalue-jitter).
    std::size_t n_chains = 20;
    /// Absolute peak-height floor of the simulated measurement (demo).
    double peak_floor = 0.01;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

using Json = nlohmann::ordered_json;

/// Keys accepted in config files, in canonical order.
inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{"scenario",  "n_sites",    "j_low",     "j_high",       "delta",
                                               "theta_list", "sigma_list", "n_samples", "base_seed",    "distance_tol",
                                               "output_dir", "emit_plots", "n_chains",  "peak_floor"};
    return keys;
}

/// Scenario-dependent defaults applied under the config file.
inline Json scenario_defaults(Scenario s) {
    Json d = Json::object();
    switch (s) {
        case Scenario::demo:
            d = {{"n_sites", 6}, {"j_low", 1.0}, {"j_high", 1.0}};
            break;
        case Scenario::truncation:
            d = {{"n_sites", 100}, {"j_low", 1.0}, {"j_high", 1.0}};
            break;
        case Scenario::coupling_disorder:
            d = {{"n_sites", 50}, {"j_low", 0.9}, {"j_high", 1.1}};
            break;
        case Scenario::eigenvalue_jitter:
            d = {{"n_sites", 100}, {"j_low", 0.9}, {"j_high", 1.1}};
            break;
        case Scenario::roundtrip:
            d = {{"n_sites", 1000}, {"j_low", 0.5}, {"j_high", 1.5}};
            break;
    }
    return d;
}

namespace detail {

inline double get_real(const Json& j, const std::string& key) {
    if (!j.is_number()) throw ValidationError("field '" + key + "': expected a number, got " + j.type_name());
    return j.get<double>();
}

inline std::uint64_t get_unsigned(const Json& j, const std::string& key) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
        if (j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
        throw ValidationError("field '" + key + "': expected a nonnegative integer, got " + j.dump());
    }
    throw ValidationError("field '" + key + "': expected a nonnegative integer, got " + std::string(j.type_name()));
}

inline std::vector<double> get_real_list(const Json& j, const std::string& key) {
    if (!j.is_array()) throw ValidationError("field '" + key + "': expected a list of numbers");
    std::vector<double> out;
    for (const auto& x : j) {
        if (!x.is_number()) throw ValidationError("field '" + key + "': expected a list of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace detail

/// Rejects unknown keys; `source` names the origin in error messages.
inline void check_keys(const Json& layer, std::string_view source) {
    if (!layer.is_object()) throw ValidationError(std::string(source) + ": expected a key/value object");
    const auto& keys = config_keys();
    for (const auto& [key, value] : layer.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ValidationError(std::string(source) + ": unknown key '" + key + "'");
        }
    }
}

/// Checks invariants of a resolved config; throws ValidationError naming the field.
inline void validate(const ExperimentConfig& c) {
    if (c.n_sites < 2) throw ValidationError("field 'n_sites': need at least 2 sites");
    if (!(c.j_low > 0.0)) throw ValidationError("field 'j_low': must be > 0");
    if (!(c.j_low <= c.j_high)) throw ValidationError("field 'j_high': must be >= j_low");
    if (!(c.distance_tol > 0.0)) throw ValidationError("field 'distance_tol': must be > 0");
    if (c.n_samples == 0) throw ValidationError("field 'n_samples': must be >= 1");
    if (c.n_chains == 0) throw ValidationError("field 'n_chains': must be >= 1");
    if (!(c.peak_floor >= 0.0)) throw ValidationError("field 'peak_floor': must be >= 0");
    for (double t : c.theta_list) {
        if (!(t >= 0.0 && t < 1.0)) throw ValidationError("field 'theta_list': every theta must lie in [0, 1)");
    }
    for (double s : c.sigma_list) {
        if (!(s >= 0.0)) throw ValidationError("field 'sigma_list': every sigma must be >= 0");
    }
    if (c.output_dir.empty()) throw ValidationError("field 'output_dir': must be nonempty");
    const bool needs_theta = c.scenario == Scenario::truncation || c.scenario == Scenario::coupling_disorder;
    if (needs_theta && c.theta_list.empty()) {
        throw ValidationError("field 'theta_list': required and nonempty for scenario '" +
                              std::string(to_string(c.scenario)) + "'");
    }
    if (c.scenario == Scenario::eigenvalue_jitter && c.sigma_list.empty()) {
        throw ValidationError("field 'sigma_list': required and nonempty for scenario 'eigenvalue-jitter'");
    }
}

/// Merges layers (later wins) over scenario defaults and converts.
/// Every layer must already have passed check_keys().
inline ExperimentConfig resolve(const std::vector<Json>& layers) {
    Json merged = Json::object();
    for (const auto& layer : layers) {
        for (const auto& [key, value] : layer.items()) merged[key] = value;
    }
    if (!merged.contains("scenario")) throw ValidationError("field 'scenario': required");
    if (!merged["scenario"].is_string()) throw ValidationError("field 'scenario': expected a string");
    ExperimentConfig c;
    c.scenario = scenario_from_string(merged["scenario"].get<std::string>());

    Json full = scenario_defaults(c.scenario);
    for (const auto& [key, value] : merged.items()) full[key] = value;

    if (full.contains("n_sites")) c.n_sites = detail::get_unsigned(full["n_sites"], "n_sites");
    if (full.contains("j_low")) c.j_low = detail::get_real(full["j_low"], "j_low");
    if (full.contains("j_high")) c.j_high = detail::get_real(full["j_high"], "j_high");
    if (full.contains("delta")) c.delta = detail::get_real(full["delta"], "delta");
    if (full.contains("theta_list")) c.theta_list = detail::get_real_list(full["theta_list"], "theta_list");
    if (full.contains("sigma_list")) c.sigma_list = detail::get_real_list(full["sigma_list"], "sigma_list");
    if (full.contains("n_samples")) c.n_samples = detail::get_unsigned(full["n_samples"], "n_samples");
    if (full.contains("base_seed")) c.base_seed = detail::get_unsigned(full["base_seed"], "base_seed");
    if (full.contains("distance_tol")) c.distance_tol = detail::get_real(full["distance_tol"], "distance_tol");
    if (full.contains("output_dir")) {
        if (!full["output_dir"].is_string()) throw ValidationError("field 'output_dir': expected a string");
        c.output_dir = full["output_dir"].get<std::string>();
    }
    if (full.contains("emit_plots")) {
        if (!full["emit_plots"].is_boolean()) throw ValidationError("field 'emit_plots': expected true or false");
        c.emit_plots = full["emit_plots"].get<bool>();
    }
    if (full.contains("n_chains")) c.n_chains = detail::get_unsigned(full["n_chains"], "n_chains");
    if (full.contains("peak_floor")) c.peak_floor = detail::get_real(full["peak_floor"], "peak_floor");
    validate(c);
    return c;
}

/// Parses config-file text. An empty (or whitespace-only) file is an empty layer.
inline Json parse_config_text(const std::string& text, std::string_view source) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return Json::object();
    Json layer;
    try {
        layer = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string(source) + ": malformed config (" + e.what() + ")");
    }
    check_keys(layer, source);
    return layer;
}

inline Json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open config file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

/// Config file (optional) overlaid by command-line values.
inline ExperimentConfig parse_config(const std::optional<std::string>& path, const Json& flags) {
    std::vector<Json> layers;
    if (path) layers.push_back(load_config_file(*path));
    check_keys(flags, "command line");
    layers.push_back(flags);
    return resolve(layers);
}

/// Canonical key/value form; resolve({to_json(c)}) == c.
inline Json to_json(const ExperimentConfig& c) {
    return Json{{"scenario", to_string(c.scenario)},
                {"n_sites", c.n_sites},
                {"j_low", c.j_low},
                {"j_high", c.j_high},
                {"delta", c.delta},
                {"theta_list", c.theta_list},
                {"sigma_list", c.sigma_list},
                {"n_samples", c.n_samples},
                {"base_seed", c.base_seed},
                {"distance_tol", c.distance_tol},
                {"output_dir", c.output_dir},
                {"emit_plots", c.emit_plots},
                {"n_chains", c.n_chains},
                {"peak_floor", c.peak_floor}};
}

}  // namespace chainscope::harness
