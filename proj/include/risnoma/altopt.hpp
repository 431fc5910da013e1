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

#include <chrono>
#include <cmath>
#include <optional>
#include <vector>

#include "risnoma/beamforming.hpp"
#include "risnoma/channel.hpp"
#include "risnoma/common.hpp"
#include "risnoma/noma.hpp"
#include "risnoma/power_alloc.hpp"
#include "risnoma/rng.hpp"

namespace risnoma {

struct OptimizerConfig {
    double p_l_w = 100.0; // satellite transmit power (= budget by default)
    double p_t_w = 100.0;
    double p_c_w = 1.0;
    double gamma_min = 0.41421356; // 10 Mbps over 20 MHz
    std::optional<double> gamma_min_bar; // Step-2 floor; defaults to gamma_min
    double tol_outer = 1e-3;
    int max_outer = 20;
    double tol_eta = 1e-4;
    int max_dinkelbach = 20;
    int sca_iters = 10;
    double sca_tol = 1e-5;
    int dual_steps = 500;
    double dual_step_c = 0.1;
    BeamformingConfig beam;
    bool theta_random_init = false;

    PowerAllocConfig power_alloc(double sigma2) const
    {
        PowerAllocConfig pc;
        pc.p_l_w = p_l_w;
        pc.p_t_w = p_t_w;
        pc.p_c_w = p_c_w;
        pc.sigma2_w = sigma2;
        pc.gamma_min = gamma_min;
        pc.tol_eta = tol_eta;
        pc.max_dinkelbach = max_dinkelbach;
        pc.sca_iters = sca_iters;
        pc.sca_tol = sca_tol;
        pc.dual_steps = dual_steps;
        pc.dual_step_c = dual_step_c;
        return pc;
    }
};

struct EETraceEntry {
    int iteration = 0;
    double ee = 0.0;
    double phi = 0.0;
    double eta = 0.0;
    double rho_i = 0.0;
    double rho_j = 0.0;
    double rate_i = 0.0;
    double rate_j = 0.0;
    bool feasible = true;
    double step1_seconds = 0.0;
    double step2_seconds = 0.0;
};

struct EETrace {
    std::vector<EETraceEntry> entries;
};

enum class SolveStatus { converged, max_iters, infeasible };

struct Solution {
    PowerSplit power;
    PhaseShiftVector phases;
    double ee = 0.0;
    EETrace trace;
    SolveStatus status = SolveStatus::infeasible;
    int strong_index = 0;
    int weak_index = 1;
};

/// Effective power gains of both terminals under a reflection pattern,
/// already SIC-ordered.
inline SicOrder ordered_gains(const ChannelRealization& ch, const PhaseShiftVector& phases)
{
    const double g0 =
        std::norm(effective_gain(ch.h_direct[0], ch.g_sat_ris, phases, ch.f_ris_gt[0]));
    const double g1 =
        std::norm(effective_gain(ch.h_direct[1], ch.g_sat_ris, phases, ch.f_ris_gt[1]));
    return sic_order(g0, g1);
}

struct FeasibilityReport {
    bool feasible = false;
    double best_margin = -std::numeric_limits<double>::infinity();
    PowerSplit witness;
};

/// Coarse 200 x 200 screen over the split simplex: is any allocation able to
/// meet both QoS floors at the full budget under the current phases?
inline FeasibilityReport check_feasibility(const ChannelRealization& ch,
                                           const OptimizerConfig& cfg,
                                           const PhaseShiftVector& phases)
{
    const SicOrder ord = ordered_gains(ch, phases);
    const double s2 = ch.noise_power_w;
    FeasibilityReport rep;
    const int n = 200;
    for (int a = 0; a <= n; ++a) {
        const double rho_i = double(a) / n;
        for (int b = 0; a + b <= n; ++b) {
            const double rho_j = double(b) / n;
            PowerSplit ps{rho_i, rho_j, cfg.p_t_w, cfg.p_c_w};
            const double margin = std::min(sinr_strong(ps, ord.gains, s2) - cfg.gamma_min,
                                           sinr_weak(ps, ord.gains, s2) - cfg.gamma_min);
            if (margin > rep.best_margin) {
                rep.best_margin = margin;
                rep.witness = ps;
            }
            if (margin >= 0) {
                rep.feasible = true;
                return rep;
            }
        }
    }
    return rep;
}

/// EE of a (power, phases) pair recomputed from scratch.
inline double evaluate_solution_ee(const ChannelRealization& ch, const PowerSplit& power,
                                   const PhaseShiftVector& phases, int strong, int weak)
{
    const double r = full_sum_rate(ch, power, phases, strong, weak);
    return energy_efficiency(r, power);
}

/// Two-step alternating optimization: power allocation under fixed phases,
/// then passive beamforming under the fixed split, until the efficiency
/// settles. Every step carries a monotone safeguard, so the recorded trace
/// never decreases beyond numerical slack.
inline Solution optimize(const ChannelRealization& ch, const OptimizerConfig& cfg,
                         SplitMix64 rng)
{
    using Clock = std::chrono::steady_clock;
    const Eigen::Index m = ch.elements();

    Solution sol;
    sol.phases = cfg.theta_random_init && m > 0 ? PhaseShiftVector::random(m, rng)
                                                : PhaseShiftVector::ones(m);
    sol.power = PowerSplit{0.0, 0.0, cfg.p_l_w, cfg.p_c_w};

    const auto gate = check_feasibility(ch, cfg, sol.phases);
    if (!gate.feasible) {
        sol.status = SolveStatus::infeasible;
        return sol;
    }

    const double gbar = cfg.gamma_min_bar.value_or(cfg.gamma_min);
    double ee_prev = 0.0;
    sol.status = SolveStatus::max_iters;
    PowerSplit prev_power = sol.power;
    PhaseShiftVector prev_phases = sol.phases;
    int prev_strong = 0, prev_weak = 1;

    for (int r = 1; r <= cfg.max_outer; ++r) {
        prev_power = sol.power;
        prev_phases = sol.phases;
        prev_strong = sol.strong_index;
        prev_weak = sol.weak_index;
        EETraceEntry entry;
        entry.iteration = r;

        // Step 1: NOMA split at the satellite, phases fixed.
        const auto t1 = Clock::now();
        const SicOrder ord = ordered_gains(ch, sol.phases);
        sol.strong_index = ord.strong_index;
        sol.weak_index = ord.weak_index;
        const auto pa = dinkelbach_power_allocation(ord.gains, cfg.power_alloc(ch.noise_power_w));
        entry.step1_seconds = std::chrono::duration<double>(Clock::now() - t1).count();
        if (pa.state.status == AllocStatus::infeasible) {
            if (r == 1) {
                sol.status = SolveStatus::infeasible;
                return sol;
            }
            break; // keep the previous iterate
        }
        PowerSplit ps = pa.split;
        // Safeguard: never follow a split that lowers the efficiency.
        if (r > 1 && evaluate_solution_ee(ch, ps, sol.phases, ord.strong_index,
                                          ord.weak_index) <
                         evaluate_solution_ee(ch, sol.power, sol.phases, ord.strong_index,
                                              ord.weak_index))
            ps = sol.power;
        sol.power = ps;
        entry.phi = pa.state.phi;
        entry.eta = pa.state.eta;
        entry.rho_i = ps.rho_i;
        entry.rho_j = ps.rho_j;

        // Step 2: reflection phases at the surface, split fixed.
        const auto t2 = Clock::now();
        if (m > 0) {
            auto beam_rng = rng.fork(0x5200 + std::uint64_t(r));
            const auto beam = passive_beamforming(ch, ps, sol.phases, gbar, cfg.beam, beam_rng,
                                                  ord.strong_index, ord.weak_index);
            // Revert a pattern that breaks the Step-1 QoS feasibility.
            const SicOrder after = ordered_gains(ch, beam.phases);
            double lo = 0.0, hi = 1.0;
            const bool still_ok = detail::qos_interval(
                after.gains, cfg.p_l_w, ch.noise_power_w, cfg.gamma_min, lo, hi);
            if (still_ok) {
                sol.phases = beam.phases;
                // The gains moved under the split; a boundary allocation may
                // now sit just outside the QoS interval, so re-project it.
                const double lo_c = std::clamp(lo, 1e-6, 1.0 - 1e-6);
                const double hi_c = std::clamp(hi, 1e-6, 1.0 - 1e-6);
                if (lo_c <= hi_c) {
                    const double rho = std::clamp(sol.power.rho_i, lo_c, hi_c);
                    sol.power.rho_i = rho;
                    sol.power.rho_j = 1.0 - rho;
                }
            }
        }
        entry.step2_seconds = std::chrono::duration<double>(Clock::now() - t2).count();

        const SicOrder now = ordered_gains(ch, sol.phases);
        sol.strong_index = now.strong_index;
        sol.weak_index = now.weak_index;
        entry.rate_i = rate(sinr_strong(sol.power, now.gains, ch.noise_power_w));
        entry.rate_j = rate(sinr_weak(sol.power, now.gains, ch.noise_power_w));
        entry.ee = energy_efficiency(entry.rate_i + entry.rate_j, sol.power);
        entry.feasible = satisfies_constraints(sol.power, now.gains, ch.noise_power_w,
                                               cfg.gamma_min, cfg.p_t_w, 1e-8);

        if (r > 1 && entry.ee < ee_prev - 1e-6) {
            // Reject the decreasing step: restore the previous iterate and stop.
            sol.power = prev_power;
            sol.phases = prev_phases;
            sol.strong_index = prev_strong;
            sol.weak_index = prev_weak;
            sol.ee = ee_prev;
            sol.status = SolveStatus::converged;
            break;
        }

        sol.trace.entries.push_back(entry);
        sol.ee = entry.ee;
        if (r > 1 && std::abs(entry.ee - ee_prev) <= cfg.tol_outer * std::max(ee_prev, 1e-300)) {
            sol.status = SolveStatus::converged;
            break;
        }
        ee_prev = entry.ee;
    }
    return sol;
}

} // namespace risnoma
