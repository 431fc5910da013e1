// SPDX-License-Identifier: Apache-2.0
//
// risnoma - energy-efficient RIS-assisted NOMA downlink for LEO satellites
// Copyright (c) 2026 the risnoma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "risnoma/altopt.hpp"
#include "risnoma/channel.hpp"
#include "risnoma/common.hpp"

namespace risnoma {

enum class Framework { proposed, benchmark_fixed_phase, conventional_no_ris };

inline const char* framework_name(Framework f)
{
    switch (f) {
        case Framework::proposed: return "proposed";
        case Framework::benchmark_fixed_phase: return "benchmark_fixed_phase";
        case Framework::conventional_no_ris: return "conventional_no_ris";
    }
    return "?";
}

inline std::optional<Framework> framework_from_name(const std::string& s)
{
    if (s == "proposed") return Framework::proposed;
    if (s == "benchmark_fixed_phase") return Framework::benchmark_fixed_phase;
    if (s == "conventional_no_ris") return Framework::conventional_no_ris;
    return std::nullopt;
}

struct SolverConfig {
    double tol_eta = 1e-4;
    double tol_outer = 1e-3;
    int max_outer = 20;
    int max_dinkelbach = 20;
    int sca_iters = 10;
    double sca_tol = 1e-5;
    int dual_steps = 500;
    double dual_step_c = 0.1;
    int ccp_iters = 10;
    double ccp_tol = 1e-4;
    int randomization_samples = 200;
    double sdp_gap = 1e-8;
    bool rank_one_penalty = false;
    double penalty_mu = 10.0;
    std::optional<double> gamma_min_bar;
    bool theta_random_init = false;
};

/// Everything one simulation campaign needs; the defaults reproduce the
/// reference setup (Ka band, 64 elements, 50 dBm budget, 20 MHz terminals,
/// 10 Mbps per-terminal QoS).
struct ScenarioConfig {
    GeometryConfig geometry;
    int ris_elements = 64;
    double p_t_dbm = 50.0;
    double p_c_w = 1.0;
    double bandwidth_hz = 20e6;
    std::optional<double> qos_rate_bps; // default 10 Mbps when gamma_min unset
    std::optional<double> gamma_min;
    double noise_figure_db = 7.0;
    std::optional<double> noise_power_w;
    SolverConfig solver;
    int trials = 200;
    std::uint64_t master_seed = 1;
    std::vector<Framework> frameworks = {Framework::proposed, Framework::benchmark_fixed_phase,
                                         Framework::conventional_no_ris};
    std::vector<double> power_grid_dbm = {34, 38, 42, 46, 50};
    std::vector<double> qos_grid_mbps = {2, 6, 10, 14, 18};
    std::vector<int> convergence_m = {32, 64};
    int jobs = 1;

    double noise_watts() const
    {
        return noise_power_w ? *noise_power_w : thermal_noise_watts(bandwidth_hz, noise_figure_db);
    }

    double gamma_min_value() const
    {
        if (gamma_min) return *gamma_min;
        const double rate_bps = qos_rate_bps.value_or(10e6);
        return qos_rate_to_sinr(rate_bps, bandwidth_hz);
    }

    QosSpec qos() const
    {
        QosSpec q;
        q.min_sinr = gamma_min_value();
        if (!gamma_min) q.derived_from_rate_bps = qos_rate_bps.value_or(10e6);
        q.bandwidth_hz = bandwidth_hz;
        return q;
    }

    double p_t_watts() const { return dbm_to_watts(p_t_dbm); }

    OptimizerConfig optimizer() const
    {
        OptimizerConfig oc;
        oc.p_l_w = oc.p_t_w = p_t_watts();
        oc.p_c_w = p_c_w;
        oc.gamma_min = gamma_min_value();
        oc.gamma_min_bar = solver.gamma_min_bar;
        oc.tol_outer = solver.tol_outer;
        oc.max_outer = solver.max_outer;
        oc.tol_eta = solver.tol_eta;
        oc.max_dinkelbach = solver.max_dinkelbach;
        oc.sca_iters = solver.sca_iters;
        oc.sca_tol = solver.sca_tol;
        oc.dual_steps = solver.dual_steps;
        oc.dual_step_c = solver.dual_step_c;
        oc.beam.ccp_iters = solver.ccp_iters;
        oc.beam.ccp_tol = solver.ccp_tol;
        oc.beam.randomization_samples = solver.randomization_samples;
        oc.beam.sdp_gap = solver.sdp_gap;
        oc.beam.rank_one_penalty = solver.rank_one_penalty;
        oc.beam.penalty_mu = solver.penalty_mu;
        oc.theta_random_init = solver.theta_random_init;
        return oc;
    }

    void validate() const
    {
        geometry.validate();
        require(ris_elements >= 0, "ris_elements must be >= 0");
        require(p_c_w > 0, "p_c_w must be > 0");
        require(bandwidth_hz > 0, "bandwidth_hz must be > 0");
        require(!(qos_rate_bps && gamma_min),
                "set either qos_rate_bps or gamma_min, not both");
        require(!qos_rate_bps || *qos_rate_bps >= 0, "qos_rate_bps must be >= 0");
        require(!gamma_min || *gamma_min >= 0, "gamma_min must be >= 0");
        require(!noise_power_w || *noise_power_w > 0, "noise_power_w must be > 0");
        require(trials >= 1, "trials must be >= 1");
        require(!frameworks.empty(), "frameworks must not be empty");
        require(jobs >= 1, "jobs must be >= 1");
        for (int m : convergence_m) require(m >= 1, "convergence_m entries must be >= 1");
        require(solver.max_outer >= 1 && solver.max_dinkelbach >= 1 && solver.sca_iters >= 1 &&
                    solver.dual_steps >= 1 && solver.ccp_iters >= 1 &&
                    solver.randomization_samples >= 1,
                "solver iteration counts must be >= 1");
    }
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void config_error(const std::string& path, const std::string& what)
{
    throw std::invalid_argument("config: " + (path.empty() ? what : path + ": " + what));
}

inline void check_known_keys(const json& obj, const std::vector<std::string>& known,
                             const std::string& path)
{
    for (const auto& item : obj.items()) {
        bool found = false;
        for (const auto& k : known)
            if (item.key() == k) {
                found = true;
                break;
            }
        if (!found) config_error(path.empty() ? item.key() : path + "." + item.key(),
                                 "unknown key");
    }
}

template <typename T>
void read_field(const json& obj, const char* key, T& out, const std::string& path)
{
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        config_error(path.empty() ? key : path + "." + std::string(key), e.what());
    }
}

template <typename T>
void read_optional(const json& obj, const char* key, std::optional<T>& out,
                   const std::string& path)
{
    if (!obj.contains(key)) return;
    T v{};
    read_field(obj, key, v, path);
    out = v;
}

template <typename T, size_t N>
void read_array(const json& obj, const char* key, std::array<T, N>& out,
                const std::string& path)
{
    if (!obj.contains(key)) return;
    const auto& a = obj.at(key);
    if (!a.is_array() || a.size() != N)
        config_error(path + "." + key, "expected an array of " + std::to_string(N) + " numbers");
    for (size_t i = 0; i < N; ++i) out[i] = a[i].get<T>();
}

} // namespace detail

/// Parse a configuration from JSON text. Unspecified keys keep their
/// defaults; unknown keys are a hard error naming the offending path.
inline ScenarioConfig parse_config_text(const std::string& text)
{
    using detail::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        detail::config_error("", e.what());
    }
    if (!j.is_object()) detail::config_error("", "top level must be an object");

    ScenarioConfig cfg;
    detail::check_known_keys(
        j,
        {"geometry", "ris_elements", "p_t_dbm", "p_c_w", "bandwidth_hz", "qos_rate_bps",
         "gamma_min", "noise_figure_db", "noise_power_w", "solver", "trials", "master_seed",
         "frameworks", "power_grid_dbm", "qos_grid_mbps", "convergence_m", "jobs"},
        "");

    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        if (!g.is_object()) detail::config_error("geometry", "must be an object");
        detail::check_known_keys(g,
                                 {"sat_altitude_m", "sat_gt_distance_m", "sat_ris_distance_m",
                                  "ris_gt_distance_m", "boresight_angle_rad",
                                  "ris_boresight_angle_rad", "theta_3db_rad", "carrier_hz",
                                  "pathloss_exponent", "g_max_dbi", "g_rx_dbi",
                                  "ris_rx_gain_dbi", "enforce_ka_band"},
                                 "geometry");
        auto& geo = cfg.geometry;
        detail::read_field(g, "sat_altitude_m", geo.sat_altitude_m, "geometry");
        detail::read_array(g, "sat_gt_distance_m", geo.sat_gt_distance_m, "geometry");
        detail::read_field(g, "sat_ris_distance_m", geo.sat_ris_distance_m, "geometry");
        detail::read_array(g, "ris_gt_distance_m", geo.ris_gt_distance_m, "geometry");
        detail::read_array(g, "boresight_angle_rad", geo.boresight_angle_rad, "geometry");
        detail::read_field(g, "ris_boresight_angle_rad", geo.ris_boresight_angle_rad, "geometry");
        detail::read_field(g, "theta_3db_rad", geo.theta_3db_rad, "geometry");
        detail::read_field(g, "carrier_hz", geo.carrier_hz, "geometry");
        detail::read_field(g, "pathloss_exponent", geo.pathloss_exponent, "geometry");
        detail::read_field(g, "g_max_dbi", geo.g_max_dbi, "geometry");
        detail::read_field(g, "g_rx_dbi", geo.g_rx_dbi, "geometry");
        detail::read_field(g, "ris_rx_gain_dbi", geo.ris_rx_gain_dbi, "geometry");
        detail::read_field(g, "enforce_ka_band", geo.enforce_ka_band, "geometry");
    }

    detail::read_field(j, "ris_elements", cfg.ris_elements, "");
    detail::read_field(j, "p_t_dbm", cfg.p_t_dbm, "");
    detail::read_field(j, "p_c_w", cfg.p_c_w, "");
    detail::read_field(j, "bandwidth_hz", cfg.bandwidth_hz, "");
    detail::read_optional(j, "qos_rate_bps", cfg.qos_rate_bps, "");
    detail::read_optional(j, "gamma_min", cfg.gamma_min, "");
    detail::read_field(j, "noise_figure_db", cfg.noise_figure_db, "");
    detail::read_optional(j, "noise_power_w", cfg.noise_power_w, "");

    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        if (!s.is_object()) detail::config_error("solver", "must be an object");
        detail::check_known_keys(
            s,
            {"tol_eta", "tol_outer", "max_outer", "max_dinkelbach", "sca_iters", "sca_tol",
             "dual_steps", "dual_step_c", "ccp_iters", "ccp_tol", "randomization_samples",
             "sdp_gap", "rank_one_penalty", "penalty_mu", "gamma_min_bar",
             "theta_random_init"},
            "solver");
        auto& sv = cfg.solver;
        detail::read_field(s, "tol_eta", sv.tol_eta, "solver");
        detail::read_field(s, "tol_outer", sv.tol_outer, "solver");
        detail::read_field(s, "max_outer", sv.max_outer, "solver");
        detail::read_field(s, "max_dinkelbach", sv.max_dinkelbach, "solver");
        detail::read_field(s, "sca_iters", sv.sca_iters, "solver");
        detail::read_field(s, "sca_tol", sv.sca_tol, "solver");
        detail::read_field(s, "dual_steps", sv.dual_steps, "solver");
        detail::read_field(s, "dual_step_c", sv.dual_step_c, "solver");
        detail::read_field(s, "ccp_iters", sv.ccp_iters, "solver");
        detail::read_field(s, "ccp_tol", sv.ccp_tol, "solver");
        detail::read_field(s, "randomization_samples", sv.randomization_samples, "solver");
        detail::read_field(s, "sdp_gap", sv.sdp_gap, "solver");
        detail::read_field(s, "rank_one_penalty", sv.rank_one_penalty, "solver");
        detail::read_field(s, "penalty_mu", sv.penalty_mu, "solver");
        detail::read_optional(s, "gamma_min_bar", sv.gamma_min_bar, "solver");
        detail::read_field(s, "theta_random_init", sv.theta_random_init, "solver");
    }

    detail::read_field(j, "trials", cfg.trials, "");
    detail::read_field(j, "master_seed", cfg.master_seed, "");
    if (j.contains("frameworks")) {
        cfg.frameworks.clear();
        if (!j.at("frameworks").is_array()) detail::config_error("frameworks", "must be an array");
        for (const auto& f : j.at("frameworks")) {
            const auto fw = framework_from_name(f.get<std::string>());
            if (!fw) detail::config_error("frameworks", "unknown framework '" +
                                                            f.get<std::string>() + "'");
            cfg.frameworks.push_back(*fw);
        }
    }
    detail::read_field(j, "power_grid_dbm", cfg.power_grid_dbm, "");
    detail::read_field(j, "qos_grid_mbps", cfg.qos_grid_mbps, "");
    detail::read_field(j, "convergence_m", cfg.convergence_m, "");
    detail::read_field(j, "jobs", cfg.jobs, "");

    cfg.validate();
    return cfg;
}

inline ScenarioConfig parse_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) detail::config_error(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

/// Normalized JSON rendering: every key present, keys sorted, fixed layout.
/// serialize(parse(x)) is a fixed point.
inline std::string serialize_config(const ScenarioConfig& cfg)
{
    using detail::json;
    json g{{"sat_altitude_m", cfg.geometry.sat_altitude_m},
           {"sat_gt_distance_m", cfg.geometry.sat_gt_distance_m},
           {"sat_ris_distance_m", cfg.geometry.sat_ris_distance_m},
           {"ris_gt_distance_m", cfg.geometry.ris_gt_distance_m},
           {"boresight_angle_rad", cfg.geometry.boresight_angle_rad},
           {"ris_boresight_angle_rad", cfg.geometry.ris_boresight_angle_rad},
           {"theta_3db_rad", cfg.geometry.theta_3db_rad},
           {"carrier_hz", cfg.geometry.carrier_hz},
           {"pathloss_exponent", cfg.geometry.pathloss_exponent},
           {"g_max_dbi", cfg.geometry.g_max_dbi},
           {"g_rx_dbi", cfg.geometry.g_rx_dbi},
           {"ris_rx_gain_dbi", cfg.geometry.ris_rx_gain_dbi},
           {"enforce_ka_band", cfg.geometry.enforce_ka_band}};
    json s{{"tol_eta", cfg.solver.tol_eta},
           {"tol_outer", cfg.solver.tol_outer},
           {"max_outer", cfg.solver.max_outer},
           {"max_dinkelbach", cfg.solver.max_dinkelbach},
           {"sca_iters", cfg.solver.sca_iters},
           {"sca_tol", cfg.solver.sca_tol},
           {"dual_steps", cfg.solver.dual_steps},
           {"dual_step_c", cfg.solver.dual_step_c},
           {"ccp_iters", cfg.solver.ccp_iters},
           {"ccp_tol", cfg.solver.ccp_tol},
           {"randomization_samples", cfg.solver.randomization_samples},
           {"sdp_gap", cfg.solver.sdp_gap},
           {"rank_one_penalty", cfg.solver.rank_one_penalty},
           {"penalty_mu", cfg.solver.penalty_mu},
           {"theta_random_init", cfg.solver.theta_random_init}};
    if (cfg.solver.gamma_min_bar) s["gamma_min_bar"] = *cfg.solver.gamma_min_bar;

    json names = json::array();
    for (Framework f : cfg.frameworks) names.push_back(framework_name(f));

    json j{{"geometry", g},
           {"ris_elements", cfg.ris_elements},
           {"p_t_dbm", cfg.p_t_dbm},
           {"p_c_w", cfg.p_c_w},
           {"bandwidth_hz", cfg.bandwidth_hz},
           {"noise_figure_db", cfg.noise_figure_db},
           {"solver", s},
           {"trials", cfg.trials},
           {"master_seed", cfg.master_seed},
           {"frameworks", names},
           {"power_grid_dbm", cfg.power_grid_dbm},
           {"qos_grid_mbps", cfg.qos_grid_mbps},
           {"convergence_m", cfg.convergence_m},
           {"jobs", cfg.jobs}};
    if (cfg.qos_rate_bps) j["qos_rate_bps"] = *cfg.qos_rate_bps;
    if (cfg.gamma_min) j["gamma_min"] = *cfg.gamma_min;
    if (cfg.noise_power_w) j["noise_power_w"] = *cfg.noise_power_w;
    return j.dump(2) + "\n";
}

} // namespace risnoma
