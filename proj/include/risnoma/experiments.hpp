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

#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include "risnoma/altopt.hpp"
#include "risnoma/config.hpp"
#include "risnoma/stats.hpp"

namespace risnoma {

struct TrialResult {
    std::uint64_t seed = 0;
    Framework framework = Framework::proposed;
    double ee = 0.0;
    double rate_i = 0.0;
    double rate_j = 0.0;
    int iterations = 0;
    bool feasible = true;
};

struct SweepPoint {
    double param_value = 0.0;
    Framework framework = Framework::proposed;
    double mean_ee = 0.0;
    double ci95 = 0.0;
    double infeasible_frac = 0.0;
    int trials = 0;
};

struct SweepResult {
    std::string param_name;
    std::vector<SweepPoint> points;
};

struct ConvergenceRow {
    int m = 0;
    int iteration = 0;
    double mean_ee = 0.0;
    double ci95 = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
};

namespace detail {

// Substream tags: one per purpose, so every framework sees byte-identical
// channel draws for a given trial seed.
inline constexpr std::uint64_t kChannelStream = 0x11;
inline constexpr std::uint64_t kBenchmarkPhaseStream = 0x22;
inline constexpr std::uint64_t kOptimizerStream = 0x33;

template <typename Fn>
void parallel_for(int n, int jobs, Fn&& fn)
{
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    const int nw = std::min(jobs, n);
    workers.reserve(size_t(nw));
    for (int w = 0; w < nw; ++w)
        workers.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : workers) t.join();
}

/// Step-1-only allocation at fixed gains; shared by the benchmark and
/// conventional frameworks.
inline TrialResult allocate_only(const EffectiveGains& gains, double sigma2,
                                 const OptimizerConfig& oc)
{
    TrialResult r;
    const auto pa = dinkelbach_power_allocation(gains, oc.power_alloc(sigma2));
    r.iterations = pa.state.iteration;
    if (pa.state.status == AllocStatus::infeasible) {
        r.feasible = false;
        return r;
    }
    r.feasible = true;
    r.rate_i = rate(sinr_strong(pa.split, gains, sigma2));
    r.rate_j = rate(sinr_weak(pa.split, gains, sigma2));
    r.ee = energy_efficiency(r.rate_i + r.rate_j, pa.split);
    return r;
}

} // namespace detail

/// One Monte Carlo trial. All frameworks replay the same channel stream;
/// they differ only in what they are allowed to optimize.
inline TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t seed, Framework fw)
{
    SplitMix64 root(seed);
    auto channel_rng = root.fork(detail::kChannelStream);
    const ChannelRealization ch = make_channel_realization(
        cfg.geometry, cfg.ris_elements, cfg.noise_watts(), channel_rng);
    const OptimizerConfig oc = cfg.optimizer();

    TrialResult r;
    r.seed = seed;
    r.framework = fw;

    switch (fw) {
        case Framework::proposed: {
            const Solution sol = optimize(ch, oc, root.fork(detail::kOptimizerStream));
            r.feasible = sol.status != SolveStatus::infeasible;
            r.ee = sol.ee;
            r.iterations = int(sol.trace.entries.size());
            if (!sol.trace.entries.empty()) {
                r.rate_i = sol.trace.entries.back().rate_i;
                r.rate_j = sol.trace.entries.back().rate_j;
            }
            break;
        }
        case Framework::benchmark_fixed_phase: {
            auto phase_rng = root.fork(detail::kBenchmarkPhaseStream);
            const PhaseShiftVector fixed =
                cfg.ris_elements > 0 ? PhaseShiftVector::random(cfg.ris_elements, phase_rng)
                                     : PhaseShiftVector::ones(0);
            const SicOrder ord = ordered_gains(ch, fixed);
            r = detail::allocate_only(ord.gains, ch.noise_power_w, oc);
            r.seed = seed;
            r.framework = fw;
            break;
        }
        case Framework::conventional_no_ris: {
            const SicOrder ord = sic_order(std::norm(ch.h_direct[0]), std::norm(ch.h_direct[1]));
            r = detail::allocate_only(ord.gains, ch.noise_power_w, oc);
            r.seed = seed;
            r.framework = fw;
            break;
        }
    }
    return r;
}

/// Mean, spread and feasibility of a batch of trials. Infeasible trials
/// enter the mean with their (zero-power) efficiency rather than being
/// dropped, and are counted separately.
inline SweepPoint aggregate(const std::vector<TrialResult>& results)
{
    require(!results.empty(), "aggregate: need at least one trial");
    std::vector<double> ee;
    ee.reserve(results.size());
    int infeasible = 0;
    for (const auto& r : results) {
        ee.push_back(r.ee);
        if (!r.feasible) ++infeasible;
    }
    const SampleStats st = sample_stats(ee);
    SweepPoint p;
    p.framework = results.front().framework;
    p.mean_ee = st.mean;
    p.ci95 = st.ci95_halfwidth;
    p.infeasible_frac = double(infeasible) / double(results.size());
    p.trials = int(results.size());
    return p;
}

/// All trials of one framework at one operating point, parallel over seeds,
/// reduced in seed order.
inline std::vector<TrialResult> run_trials(const ScenarioConfig& cfg, Framework fw)
{
    std::vector<TrialResult> out(size_t(cfg.trials));
    detail::parallel_for(cfg.trials, cfg.jobs, [&](int i) {
        out[size_t(i)] = run_trial(cfg, trial_seed(cfg.master_seed, std::uint64_t(i)), fw);
    });
    return out;
}

/// Mean efficiency per outer iteration for each surface size, padded with
/// the final value once a trial has converged (the curve a convergence plot
/// shows).
inline ConvergenceTable convergence_trace(const ScenarioConfig& cfg,
                                          const std::vector<int>& m_values)
{
    require(!m_values.empty(), "convergence_trace: need at least one element count");
    ConvergenceTable table;
    for (int m : m_values) {
        ScenarioConfig c = cfg;
        c.ris_elements = m;
        std::vector<std::vector<double>> traces(size_t(c.trials));
        detail::parallel_for(c.trials, c.jobs, [&](int i) {
            SplitMix64 root(trial_seed(c.master_seed, std::uint64_t(i)));
            auto channel_rng = root.fork(detail::kChannelStream);
            const ChannelRealization ch = make_channel_realization(
                c.geometry, c.ris_elements, c.noise_watts(), channel_rng);
            const Solution sol =
                optimize(ch, c.optimizer(), root.fork(detail::kOptimizerStream));
            std::vector<double> t;
            t.reserve(sol.trace.entries.size());
            for (const auto& e : sol.trace.entries) t.push_back(e.ee);
            if (t.empty()) t.push_back(0.0);
            traces[size_t(i)] = std::move(t);
        });
        size_t depth = 0;
        for (const auto& t : traces) depth = std::max(depth, t.size());
        for (size_t it = 0; it < depth; ++it) {
            std::vector<double> col;
            col.reserve(traces.size());
            for (const auto& t : traces) col.push_back(it < t.size() ? t[it] : t.back());
            const SampleStats st = sample_stats(col);
            table.rows.push_back({m, int(it + 1), st.mean, st.ci95_halfwidth});
        }
    }
    return table;
}

/// Mean efficiency against the transmit-power budget, one series per
/// framework, channels paired across frameworks by the trial seed.
inline SweepResult sweep_power(const ScenarioConfig& cfg,
                               const std::vector<double>& power_grid_dbm)
{
    require(!power_grid_dbm.empty(), "sweep_power: empty grid");
    for (size_t i = 1; i < power_grid_dbm.size(); ++i)
        require(power_grid_dbm[i] > power_grid_dbm[i - 1], "sweep_power: grid must ascend");
    SweepResult res;
    res.param_name = "p_t_dbm";
    for (double p : power_grid_dbm) {
        ScenarioConfig c = cfg;
        c.p_t_dbm = p;
        for (Framework fw : cfg.frameworks) {
            auto point = aggregate(run_trials(c, fw));
            point.param_value = p;
            res.points.push_back(point);
        }
    }
    return res;
}

/// Mean efficiency against the per-terminal rate floor (in Mbps).
inline SweepResult sweep_qos(const ScenarioConfig& cfg, const std::vector<double>& qos_grid_mbps)
{
    require(!qos_grid_mbps.empty(), "sweep_qos: empty grid");
    for (size_t i = 1; i < qos_grid_mbps.size(); ++i)
        require(qos_grid_mbps[i] > qos_grid_mbps[i - 1], "sweep_qos: grid must ascend");
    SweepResult res;
    res.param_name = "qos_rate_mbps";
    for (double mbps : qos_grid_mbps) {
        ScenarioConfig c = cfg;
        c.gamma_min.reset();
        c.qos_rate_bps = mbps * 1e6;
        for (Framework fw : cfg.frameworks) {
            auto point = aggregate(run_trials(c, fw));
            point.param_value = mbps;
            res.points.push_back(point);
        }
    }
    return res;
}

} // namespace risnoma
