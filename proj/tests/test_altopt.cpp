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

#include <doctest.h>

#include <cmath>

#include "risnoma/altopt.hpp"
#include "test_support.hpp"

using namespace risnoma;
using testsupport::synthetic_channel;

namespace {

OptimizerConfig desk_config()
{
    OptimizerConfig cfg;
    cfg.p_l_w = cfg.p_t_w = 2.0;
    cfg.p_c_w = 2.0;
    cfg.gamma_min = 0.05;
    cfg.beam.randomization_samples = 60;
    return cfg;
}

} // namespace

TEST_CASE("without a surface the optimizer reduces to pure power allocation")
{
    SplitMix64 rng(51);
    int solved = 0;
    for (int i = 0; i < 12; ++i) {
        auto ch = synthetic_channel(0, rng);
        const auto cfg = desk_config();
        const auto sol = optimize(ch, cfg, rng.fork(i));
        if (sol.status == SolveStatus::infeasible) continue; // deep direct-link fade
        REQUIRE(sol.status == SolveStatus::converged);

        const auto ord = sic_order(std::norm(ch.h_direct[0]), std::norm(ch.h_direct[1]));
        const auto oracle = power_oracle_grid(ord.gains, cfg.power_alloc(ch.noise_power_w), 2000);
        REQUIRE(oracle.feasible_found);
        CHECK(std::abs(sol.ee - oracle.ee) / oracle.ee < 1e-3);
        ++solved;
    }
    CHECK(solved >= 8);
}

TEST_CASE("the efficiency trace never decreases across outer iterations")
{
    SplitMix64 rng(52);
    int converged = 0;
    for (int i = 0; i < 100; ++i) {
        const Eigen::Index m = Eigen::Index(rng.next() % 7);
        auto ch = synthetic_channel(m, rng);
        const auto cfg = desk_config();
        const auto sol = optimize(ch, cfg, rng.fork(1000 + i));
        if (sol.status == SolveStatus::infeasible) continue;
        const auto& e = sol.trace.entries;
        REQUIRE(!e.empty());
        for (size_t r = 1; r < e.size(); ++r) CHECK(e[r].ee >= e[r - 1].ee - 1e-6);
        if (sol.status == SolveStatus::converged) ++converged;
    }
    CHECK(converged >= 85);
}

TEST_CASE("reported efficiency is reproducible from the returned solution")
{
    SplitMix64 rng(53);
    for (int i = 0; i < 30; ++i) {
        const Eigen::Index m = 1 + Eigen::Index(rng.next() % 6);
        auto ch = synthetic_channel(m, rng);
        const auto cfg = desk_config();
        const auto sol = optimize(ch, cfg, rng.fork(i));
        if (sol.status == SolveStatus::infeasible) continue;
        const double recomputed =
            evaluate_solution_ee(ch, sol.power, sol.phases, sol.strong_index, sol.weak_index);
        CHECK(std::abs(recomputed - sol.ee) < 1e-10 * (1.0 + sol.ee));
    }
}

TEST_CASE("converged solutions satisfy the full constraint set")
{
    SplitMix64 rng(54);
    for (int i = 0; i < 50; ++i) {
        const Eigen::Index m = Eigen::Index(rng.next() % 5);
        auto ch = synthetic_channel(m, rng);
        const auto cfg = desk_config();
        const auto sol = optimize(ch, cfg, rng.fork(i));
        if (sol.status == SolveStatus::infeasible) continue;
        const auto ord = ordered_gains(ch, sol.phases);
        if (sol.status == SolveStatus::converged)
            CHECK(satisfies_constraints(sol.power, ord.gains, ch.noise_power_w, cfg.gamma_min,
                                        cfg.p_t_w, 1e-6));
        CHECK(sol.phases.unit_modulus(1e-9));
    }
}

TEST_CASE("feasibility gate: trivial floors pass, impossible ones fail")
{
    SplitMix64 rng(55);
    auto ch = synthetic_channel(4, rng);
    OptimizerConfig cfg = desk_config();

    cfg.gamma_min = 0.0;
    CHECK(check_feasibility(ch, cfg, PhaseShiftVector::ones(4)).feasible);

    // Noise overwhelming the budget: every SINR collapses.
    auto deaf = ch;
    deaf.noise_power_w = 1e12;
    cfg.gamma_min = 0.1;
    CHECK(!check_feasibility(deaf, cfg, PhaseShiftVector::ones(4)).feasible);

    cfg.gamma_min = 1e9;
    const auto rep = check_feasibility(ch, cfg, PhaseShiftVector::ones(4));
    CHECK(!rep.feasible);
    CHECK(rep.best_margin < 0);

    const auto sol = optimize(ch, cfg, rng.fork(9));
    CHECK(sol.status == SolveStatus::infeasible);
    CHECK(sol.power.rho_i == 0.0);
    CHECK(sol.power.rho_j == 0.0);
    CHECK(sol.ee == 0.0);
}

TEST_CASE("coarse feasibility gate agrees with a fine grid on borderline cases")
{
    SplitMix64 rng(56);
    int agree = 0, total = 0;
    while (total < 50) {
        auto ch = synthetic_channel(2, rng);
        OptimizerConfig cfg = desk_config();
        // Bisect gamma_min to the feasibility edge, then test just around it.
        double lo = 0.0, hi = 4.0;
        for (int it = 0; it < 24; ++it) {
            const double mid = 0.5 * (lo + hi);
            cfg.gamma_min = mid;
            (check_feasibility(ch, cfg, PhaseShiftVector::ones(2)).feasible ? lo : hi) = mid;
        }
        if (lo == 0.0) continue;
        for (double scale : {0.98, 1.02}) {
            cfg.gamma_min = 0.5 * (lo + hi) * scale;
            const bool coarse = check_feasibility(ch, cfg, PhaseShiftVector::ones(2)).feasible;
            // Fine oracle: 2000 x 2000 grid.
            const auto ord = ordered_gains(ch, PhaseShiftVector::ones(2));
            bool fine = false;
            const int n = 2000;
            for (int a = 0; a <= n && !fine; ++a) {
                const double rho_i = double(a) / n;
                if (cfg.p_t_w * rho_i * ord.gains.o_i / ch.noise_power_w < cfg.gamma_min)
                    continue;
                for (int b = 0; a + b <= n; ++b) {
                    const double rho_j = double(b) / n;
                    PowerSplit ps{rho_i, rho_j, cfg.p_t_w, cfg.p_c_w};
                    if (sinr_weak(ps, ord.gains, ch.noise_power_w) >= cfg.gamma_min) {
                        fine = true;
                        break;
                    }
                }
            }
            if (coarse == fine) ++agree;
            ++total;
        }
    }
    CHECK(double(agree) / total >= 0.96);
}
