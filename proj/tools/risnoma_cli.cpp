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

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "risnoma/csv.hpp"
#include "risnoma/experiments.hpp"
#include "risnoma/plot.hpp"

namespace {

using namespace risnoma;

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> jobs;
    std::vector<std::string> frameworks;
    bool emit_plots = false;
};

void log_info(const std::string& msg) { std::fprintf(stderr, "[info] %s\n", msg.c_str()); }

ScenarioConfig load_scenario(const CliOptions& opt)
{
    ScenarioConfig cfg =
        opt.config_path.empty() ? ScenarioConfig{} : parse_config(opt.config_path);
    if (opt.seed) cfg.master_seed = *opt.seed;
    if (opt.trials) cfg.trials = *opt.trials;
    if (opt.jobs) cfg.jobs = *opt.jobs;
    if (!opt.frameworks.empty()) {
        cfg.frameworks.clear();
        for (const auto& name : opt.frameworks) {
            const auto fw = framework_from_name(name);
            if (!fw) throw std::invalid_argument("unknown framework '" + name + "'");
            cfg.frameworks.push_back(*fw);
        }
    }
    cfg.validate();
    std::filesystem::create_directories(opt.out_dir);
    return cfg;
}

std::string out_path(const CliOptions& opt, const std::string& name)
{
    return (std::filesystem::path(opt.out_dir) / name).string();
}

std::vector<PlotSeries> sweep_series(const SweepResult& sweep)
{
    std::vector<PlotSeries> series;
    for (Framework fw : {Framework::proposed, Framework::benchmark_fixed_phase,
                         Framework::conventional_no_ris}) {
        PlotSeries s;
        s.label = framework_name(fw);
        for (const auto& p : sweep.points)
            if (p.framework == fw) s.points.emplace_back(p.param_value, p.mean_ee);
        if (!s.points.empty()) series.push_back(std::move(s));
    }
    return series;
}

int cmd_convergence(const CliOptions& opt)
{
    const ScenarioConfig cfg = load_scenario(opt);
    log_info("convergence: " + std::to_string(cfg.trials) + " trials per element count");
    const auto table = convergence_trace(cfg, cfg.convergence_m);
    const auto path = out_path(opt, "convergence.csv");
    emit_csv(table, path);
    log_info("wrote " + path);
    if (opt.emit_plots) {
        std::vector<PlotSeries> series;
        for (int m : cfg.convergence_m) {
            PlotSeries s;
            s.label = "M = " + std::to_string(m);
            for (const auto& r : table.rows)
                if (r.m == m) s.points.emplace_back(double(r.iteration), r.mean_ee);
            series.push_back(std::move(s));
        }
        const auto svg = out_path(opt, "convergence.svg");
        write_file(render_line_chart("Convergence of the alternating optimization",
                                     "outer iteration", "energy efficiency (bits/s/Hz/W)",
                                     series),
                   svg);
        log_info("wrote " + svg);
    }
    std::fputs(to_csv(table).c_str(), stdout);
    return 0;
}

int cmd_sweep_power(const CliOptions& opt)
{
    const ScenarioConfig cfg = load_scenario(opt);
    log_info("sweep-power over " + std::to_string(cfg.power_grid_dbm.size()) + " points");
    const auto sweep = sweep_power(cfg, cfg.power_grid_dbm);
    const auto path = out_path(opt, "sweep_power.csv");
    emit_csv(sweep, path);
    log_info("wrote " + path);
    if (opt.emit_plots) {
        const auto svg = out_path(opt, "sweep_power.svg");
        write_file(render_line_chart("Energy efficiency vs transmit power budget",
                                     "P_T (dBm)", "energy efficiency (bits/s/Hz/W)",
                                     sweep_series(sweep)),
                   svg);
        log_info("wrote " + svg);
    }
    std::fputs(to_csv(sweep).c_str(), stdout);
    return 0;
}

int cmd_sweep_qos(const CliOptions& opt)
{
    const ScenarioConfig cfg = load_scenario(opt);
    log_info("sweep-qos over " + std::to_string(cfg.qos_grid_mbps.size()) + " points");
    const auto sweep = sweep_qos(cfg, cfg.qos_grid_mbps);
    const auto path = out_path(opt, "sweep_qos.csv");
    emit_csv(sweep, path);
    log_info("wrote " + path);
    if (opt.emit_plots) {
        const auto svg = out_path(opt, "sweep_qos.svg");
        write_file(render_line_chart("Energy efficiency vs QoS requirement",
                                     "per-terminal rate floor (Mbps)",
                                     "energy efficiency (bits/s/Hz/W)", sweep_series(sweep)),
                   svg);
        log_info("wrote " + svg);
    }
    std::fputs(to_csv(sweep).c_str(), stdout);
    return 0;
}

int cmd_single_trial(const CliOptions& opt)
{
    const ScenarioConfig cfg = load_scenario(opt);
    const Framework fw = cfg.frameworks.front();
    log_info(std::string("single trial, framework ") + framework_name(fw));

    SplitMix64 root(cfg.master_seed);
    auto channel_rng = root.fork(detail::kChannelStream);
    const ChannelRealization ch = make_channel_realization(
        cfg.geometry, cfg.ris_elements, cfg.noise_watts(), channel_rng);
    const TrialResult r = run_trial(cfg, cfg.master_seed, fw);

    if (fw == Framework::proposed) {
        const Solution sol = optimize(ch, cfg.optimizer(), root.fork(detail::kOptimizerStream));
        const auto path = out_path(opt, "single_trial.csv");
        emit_csv(sol.trace, path);
        log_info("wrote " + path);
    }
    std::printf("seed,framework,ee,rate_i,rate_j,iterations,feasible\n");
    std::printf("%llu,%s,%s,%s,%s,%d,%d\n", (unsigned long long)r.seed,
                framework_name(r.framework), csv_number(r.ee).c_str(),
                csv_number(r.rate_i).c_str(), csv_number(r.rate_j).c_str(), r.iterations,
                r.feasible ? 1 : 0);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"RIS-assisted NOMA LEO downlink: energy-efficiency simulator"};
    app.name("risnoma");
    app.require_subcommand(1);

    CliOptions opt;
    app.add_option("--config", opt.config_path, "JSON scenario file (defaults when omitted)");
    app.add_option("--out-dir", opt.out_dir, "Directory for CSV/SVG artifacts");
    app.add_option("--seed", opt.seed, "Master seed override");
    app.add_option("--trials", opt.trials, "Trials per operating point override");
    app.add_option("--jobs", opt.jobs, "Worker threads for independent trials");
    app.add_option("--framework", opt.frameworks,
                   "Framework subset: proposed, benchmark_fixed_phase, conventional_no_ris")
        ->delimiter(',');
    app.add_flag("--emit-plots", opt.emit_plots, "Render SVG line charts next to the CSVs");

    app.add_subcommand("convergence", "Mean efficiency per outer iteration for each M");
    app.add_subcommand("sweep-power", "Mean efficiency vs transmit-power budget");
    app.add_subcommand("sweep-qos", "Mean efficiency vs per-terminal QoS floor");
    app.add_subcommand("single-trial", "One seeded trial with its full iteration trace");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("convergence")) return cmd_convergence(opt);
        if (app.got_subcommand("sweep-power")) return cmd_sweep_power(opt);
        if (app.got_subcommand("sweep-qos")) return cmd_sweep_qos(opt);
        if (app.got_subcommand("single-trial")) return cmd_single_trial(opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "[error] %s\n", e.what());
        return 1;
    }
    return 1;
}
