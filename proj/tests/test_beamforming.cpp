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
#include <complex>

#include "risnoma/beamforming.hpp"
#include "risnoma/rng.hpp"
#include "test_support.hpp"

using namespace risnoma;
using testsupport::random_cvec;
using testsupport::random_lifted;
using testsupport::synthetic_channel;

TEST_CASE("interior-point engine reproduces the phase-alignment closed form")
{
    // max <h h^H, Xi> over the unit-diagonal PSD cone equals (sum |h_m|)^2.
    SplitMix64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::Index m = 2 + trial;
        const Eigen::VectorXcd h = random_cvec(m, rng);
        sdp::Problem pb;
        pb.m = m;
        pb.linear_atoms.push_back({h, 1.0});
        const auto res = sdp::maximize(pb);
        REQUIRE(res.status == sdp::Status::optimal);
        const double closed = std::pow(h.cwiseAbs().sum(), 2.0);
        CHECK(res.objective == doctest::Approx(closed).epsilon(1e-6));
        CHECK(res.upper_bound >= closed - 1e-12 * closed);
        CHECK(res.upper_bound <= closed + 1e-6 * closed); // certificate is tight here

        sdp::Problem dense; // same objective through the dense-remainder path
        dense.m = m;
        dense.linear = h * h.adjoint();
        const auto res2 = sdp::maximize(dense);
        REQUIRE(res2.status == sdp::Status::optimal);
        CHECK(res2.objective == doctest::Approx(closed).epsilon(1e-6));
        CHECK(res2.upper_bound >= closed - 1e-12 * closed);
        // Solution stays on the constraint set.
        for (Eigen::Index i = 0; i < m; ++i)
            CHECK(std::abs(res.xi(i, i) - 1.0) < 1e-9);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(res.xi);
        CHECK(es.eigenvalues().minCoeff() > -1e-9);
    }
}

TEST_CASE("interior-point engine certifies infeasible thresholds")
{
    SplitMix64 rng(32);
    const Eigen::VectorXcd h = random_cvec(4, rng);
    sdp::Problem pb;
    pb.m = 4;
    pb.logs.push_back({{h, 1.0, 1.0}, 1.0});
    const double cap = std::pow(h.cwiseAbs().sum(), 2.0);
    pb.ineqs.push_back({h, 1.0, -1.5 * cap}); // requires h^H Xi h >= 1.5 * achievable max
    const auto res = sdp::maximize(pb);
    CHECK(res.status == sdp::Status::infeasible);
}

TEST_CASE("cascade matrices are scaled rank-one outer products")
{
    Eigen::VectorXcd one = Eigen::VectorXcd::Ones(1);
    PowerSplit ps{1.0, 0.5, 2.0, 1.0}; // P rho_i = 2
    const auto cm = build_cascade_matrices(one, one, ps);
    CHECK(cm.g_i(0, 0).real() == doctest::Approx(2.0));
    CHECK(cm.g_j(0, 0).real() == doctest::Approx(1.0));
    CHECK(cm.g_bar_j(0, 0).real() == doctest::Approx(2.0));

    SplitMix64 rng(33);
    const Eigen::Index m = 8;
    const auto hi = random_cvec(m, rng);
    const auto hj = random_cvec(m, rng);
    PowerSplit ps2{0.3, 0.7, 2.0, 1.0};
    const auto cm2 = build_cascade_matrices(hi, hj, ps2);
    // Hermitian, PSD, rank one.
    CHECK((cm2.g_i - cm2.g_i.adjoint()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cm2.g_i);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    int positive = 0;
    for (Eigen::Index k = 0; k < m; ++k)
        if (es.eigenvalues()[k] > 1e-9 * es.eigenvalues().maxCoeff()) ++positive;
    CHECK(positive == 1);

    // Trace identity against the direct two-path evaluation.
    for (int t = 0; t < 20; ++t) {
        Eigen::VectorXcd xi_vec(m);
        for (Eigen::Index k = 0; k < m; ++k)
            xi_vec[k] = std::polar(1.0, rng.uniform(0, 2 * pi));
        const Eigen::MatrixXcd lifted = xi_vec * xi_vec.adjoint();
        const double direct = ps2.p_l_w * ps2.rho_i * std::norm(xi_vec.dot(hi));
        CHECK(std::abs((cm2.g_i * lifted).trace().real() - direct) < 1e-10 * (1 + direct));
    }

    Eigen::VectorXcd bad = Eigen::VectorXcd::Ones(m - 1);
    CHECK_THROWS_AS(build_cascade_matrices(hi, bad, ps2), std::invalid_argument);
}

TEST_CASE("dc objective: both forms agree and degenerate cases reduce")
{
    Eigen::MatrixXcd one = Eigen::MatrixXcd::Ones(1, 1);
    Eigen::VectorXcd hv = Eigen::VectorXcd::Ones(1);
    PowerSplit unit{1.0, 1.0, 1.0, 1.0};
    auto cm = build_cascade_matrices(hv, hv, unit);
    CHECK(dc_objective(one, cm, 1.0) == doctest::Approx(1.0 + std::log2(1.5)).epsilon(1e-12));
    CHECK(dc_objective(one, cm, 1.0) == doctest::Approx(1.58496).epsilon(1e-5));

    // No weak-terminal signal: pure single-user rate.
    PowerSplit only_i{0.5, 0.0, 2.0, 1.0};
    auto cm_i = build_cascade_matrices(hv, hv, only_i);
    CHECK(dc_objective(one, cm_i, 1.0) == doctest::Approx(std::log2(2.0)).epsilon(1e-12));

    SplitMix64 rng(34);
    for (int t = 0; t < 100; ++t) {
        const Eigen::Index m = 4;
        const auto cm2 = build_cascade_matrices(random_cvec(m, rng), random_cvec(m, rng),
                                                PowerSplit{0.3, 0.7, 2.0, 1.0});
        const auto xi = random_lifted(m, rng);
        const double composed =
            std::log2(1.0 + cm2.trace_gi(xi) / 1.0) +
            std::log2(1.0 + cm2.trace_gj(xi) / (cm2.trace_gbar_j(xi) + 1.0));
        CHECK(dc_objective(xi, cm2, 1.0) == doctest::Approx(composed).epsilon(1e-10));
    }
}

TEST_CASE("CCP linearization is tangent, dominant, and matches finite differences")
{
    SplitMix64 rng(35);
    const Eigen::Index m = 5;
    const auto cm = build_cascade_matrices(random_cvec(m, rng), random_cvec(m, rng),
                                           PowerSplit{0.3, 0.7, 2.0, 1.0});
    const double sigma2 = 1.0;
    const auto xi_k = random_lifted(m, rng);
    const auto lm = ccp_linearize(xi_k, cm, sigma2);

    // Tangency at the expansion point.
    CHECK(lm(cm.trace_gbar_j(xi_k)) ==
          doctest::Approx(std::log2(cm.trace_gbar_j(xi_k) + sigma2)).epsilon(1e-12));

    // The tangent over-estimates the concave term everywhere, so the
    // surrogate under-estimates the true objective.
    for (int t = 0; t < 100; ++t) {
        const auto xi = random_lifted(m, rng);
        const double tb = cm.trace_gbar_j(xi);
        CHECK(lm(tb) >= std::log2(tb + sigma2) - 1e-12);
        CHECK(surrogate_objective(xi, cm, lm, sigma2) <= dc_objective(xi, cm, sigma2) + 1e-10);
    }

    // Directional derivatives against central finite differences, separately
    // for a real-symmetric and an imaginary-antisymmetric perturbation.
    auto term = [&](const Eigen::MatrixXcd& x) { return std::log2(cm.trace_gbar_j(x) + sigma2); };
    for (int t = 0; t < 10; ++t) {
        Eigen::MatrixXcd dir_re = Eigen::MatrixXcd::Zero(m, m);
        Eigen::MatrixXcd dir_im = Eigen::MatrixXcd::Zero(m, m);
        const Eigen::Index a = Eigen::Index(rng.next() % std::uint64_t(m));
        Eigen::Index b = Eigen::Index(rng.next() % std::uint64_t(m));
        while (b == a) b = Eigen::Index(rng.next() % std::uint64_t(m));
        dir_re(a, b) = dir_re(b, a) = 1.0;
        dir_im(a, b) = std::complex<double>(0, 1);
        dir_im(b, a) = std::complex<double>(0, -1);
        const double h = 1e-5;
        for (const auto& dir : {dir_re, dir_im}) {
            const double fd = (term(xi_k + h * dir) - term(xi_k - h * dir)) / (2 * h);
            // The linear majorant has gradient slope * Gbar_j.
            const double an = lm.slope * cm.p_rho_i *
                              std::real(cm.h_hat_j.dot(dir * cm.h_hat_j));
            if (std::abs(fd) > 1e-12)
                CHECK(std::abs(an - fd) / std::max(std::abs(fd), 1e-9) < 1e-5);
        }
    }
}

TEST_CASE("SDP subproblem at M = 1 is pinned by the diagonal constraint")
{
    SplitMix64 rng(36);
    const auto cm = build_cascade_matrices(random_cvec(1, rng), random_cvec(1, rng),
                                           PowerSplit{0.4, 0.6, 2.0, 1.0});
    Eigen::MatrixXcd one = Eigen::MatrixXcd::Ones(1, 1);
    const auto lm = ccp_linearize(one, cm, 1.0);
    const auto sol = solve_sdp_subproblem(lm, cm, 0.0, 1.0, 1);
    REQUIRE(sol.status == SolverStatus::optimal);
    CHECK(sol.xi(0, 0).real() == doctest::Approx(1.0));
    CHECK(sol.objective == doctest::Approx(dc_objective(one, cm, 1.0)).epsilon(1e-12));
}

TEST_CASE("relaxed SDP value dominates every sampled unit-modulus point")
{
    SplitMix64 rng(37);
    for (int inst = 0; inst < 4; ++inst) {
        const Eigen::Index m = 6;
        const auto cm = build_cascade_matrices(random_cvec(m, rng), random_cvec(m, rng),
                                               PowerSplit{0.3, 0.7, 2.0, 1.0});
        // Sample first, linearize at the best sample: tangency turns the
        // surrogate bound into a bound on the true objective of every sample.
        std::vector<Eigen::VectorXcd> samples;
        double best_true = -1e300;
        Eigen::Index best_idx = 0;
        for (int s = 0; s < 1000; ++s) {
            Eigen::VectorXcd xi_vec(m);
            for (Eigen::Index k = 0; k < m; ++k)
                xi_vec[k] = std::polar(1.0, rng.uniform(0, 2 * pi));
            samples.push_back(xi_vec);
            const double tru = dc_objective(xi_vec * xi_vec.adjoint(), cm, 1.0);
            if (tru > best_true) {
                best_true = tru;
                best_idx = Eigen::Index(s);
            }
        }
        const Eigen::MatrixXcd anchor = samples[best_idx] * samples[best_idx].adjoint();
        const auto lm = ccp_linearize(anchor, cm, 1.0);
        const auto sol = solve_sdp_subproblem(lm, cm, 0.0, 1.0, m);
        REQUIRE(sol.status == SolverStatus::optimal);
        for (const auto& s : samples) {
            const double surr = surrogate_objective(s * s.adjoint(), cm, lm, 1.0);
            CHECK(sol.upper_bound >= surr - 1e-9 * (1.0 + std::abs(surr)));
        }
        CHECK(sol.upper_bound >= best_true - 1e-9 * (1.0 + std::abs(best_true)));
        CHECK(sol.objective >= best_true - 1e-6 * (1.0 + std::abs(best_true)));
    }
}

TEST_CASE("M = 2 relaxation dominates the exhaustive phase grid")
{
    SplitMix64 rng(38);
    int tight = 0;
    for (int inst = 0; inst < 20; ++inst) {
        auto ch = synthetic_channel(2, rng);
        PowerSplit ps{0.3, 0.7, 2.0, 1.0};
        const auto grid = beamforming_oracle_grid(ch, ps, 720);
        const auto cm = build_cascade_matrices(cascade_vector(ch.g_sat_ris, ch.f_ris_gt[0]),
                                               cascade_vector(ch.g_sat_ris, ch.f_ris_gt[1]), ps);
        const double grid_rate = ris_only_rate(grid, cm, 1.0);
        const Eigen::VectorXcd xi_vec = grid.alphas.conjugate();
        const auto lm = ccp_linearize((xi_vec * xi_vec.adjoint()).eval(), cm, 1.0);
        const auto sol = solve_sdp_subproblem(lm, cm, 0.0, 1.0, 2);
        REQUIRE(sol.status == SolverStatus::optimal);
        CHECK(sol.upper_bound >= grid_rate - 1e-8 * (1.0 + grid_rate));
        // When the relaxation returns a rank-one matrix it is tight.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sol.xi);
        if (es.eigenvalues()[0] < 1e-6 * es.eigenvalues()[1]) {
            ++tight;
            CHECK(std::abs(sol.objective - grid_rate) < 1e-4 * (1.0 + grid_rate));
        }
    }
    CHECK(tight > 0);
}

TEST_CASE("gaussian randomization recovers rank-one solutions exactly")
{
    SplitMix64 rng(39);
    const Eigen::Index m = 6;
    Eigen::VectorXcd xi_vec(m);
    for (Eigen::Index k = 0; k < m; ++k) xi_vec[k] = std::polar(1.0, rng.uniform(0, 2 * pi));
    const auto cm = build_cascade_matrices(random_cvec(m, rng), random_cvec(m, rng),
                                           PowerSplit{0.3, 0.7, 2.0, 1.0});
    SdpSolution sol;
    sol.xi = xi_vec * xi_vec.adjoint();
    sol.status = SolverStatus::optimal;
    const auto rec = gaussian_randomization(sol, cm, 0.0, 1.0, 8, rng);
    // Same point up to a global phase: identical rate and aligned entries.
    PhaseShiftVector truth;
    truth.alphas = xi_vec.conjugate();
    CHECK(rec.rate == doctest::Approx(ris_only_rate(truth, cm, 1.0)).epsilon(1e-6));
    const std::complex<double> ratio = rec.phases.alphas[0] / truth.alphas[0];
    for (Eigen::Index k = 0; k < m; ++k)
        CHECK(std::abs(rec.phases.alphas[k] - ratio * truth.alphas[k]) < 1e-6);
    CHECK(rec.phases.unit_modulus(1e-12));
}

TEST_CASE("randomized recovery reaches 95 percent of the M = 2 grid oracle")
{
    SplitMix64 rng(40);
    double ratio_sum = 0.0;
    const int n = 100;
    for (int inst = 0; inst < n; ++inst) {
        auto ch = synthetic_channel(2, rng, 0.0, 1.0); // Step-2 compare: no direct paths
        PowerSplit ps{0.3, 0.7, 2.0, 1.0};
        const auto cm = build_cascade_matrices(cascade_vector(ch.g_sat_ris, ch.f_ris_gt[0]),
                                               cascade_vector(ch.g_sat_ris, ch.f_ris_gt[1]), ps);
        const auto grid = beamforming_oracle_grid(ch, ps, 720);
        const double grid_rate = ris_only_rate(grid, cm, 1.0);

        PhaseShiftVector start = PhaseShiftVector::ones(2);
        BeamformingConfig cfg;
        auto rng_beam = rng.fork(inst);
        const auto res = passive_beamforming(ch, ps, start, 0.0, cfg, rng_beam);
        ratio_sum += (grid_rate > 0) ? res.rate_ris / grid_rate : 1.0;
    }
    CHECK(ratio_sum / n >= 0.95);
}

TEST_CASE("passive beamforming never lowers the full sum rate")
{
    SplitMix64 rng(41);
    for (int inst = 0; inst < 100; ++inst) {
        const Eigen::Index m = 1 + Eigen::Index(rng.next() % 6);
        auto ch = synthetic_channel(m, rng);
        PowerSplit ps{0.3, 0.7, 2.0, 1.0};
        PhaseShiftVector start = PhaseShiftVector::random(m, rng);
        const double before = full_sum_rate(ch, ps, start, 0, 1);
        BeamformingConfig cfg;
        cfg.randomization_samples = 50;
        auto rng_beam = rng.fork(1000 + inst);
        const auto res = passive_beamforming(ch, ps, start, 0.0, cfg, rng_beam);
        CHECK(res.rate_full >= before - 1e-12);
        CHECK(res.phases.unit_modulus(1e-9));
    }
}

TEST_CASE("CCP iterations never decrease the true objective")
{
    SplitMix64 rng(42);
    for (int inst = 0; inst < 10; ++inst) {
        auto ch = synthetic_channel(8, rng);
        PowerSplit ps{0.3, 0.7, 2.0, 1.0};
        PhaseShiftVector start = PhaseShiftVector::random(8, rng);
        BeamformingConfig cfg;
        auto rng_beam = rng.fork(inst);
        const auto res = passive_beamforming(ch, ps, start, 0.0, cfg, rng_beam);
        for (size_t k = 1; k < res.ccp_objective_trace.size(); ++k)
            CHECK(res.ccp_objective_trace[k] >=
                  res.ccp_objective_trace[k - 1] -
                      1e-8 * (1.0 + std::abs(res.ccp_objective_trace[k - 1])));
    }
}

TEST_CASE("M = 1 beamforming is a no-op up to the global phase")
{
    SplitMix64 rng(43);
    auto ch = synthetic_channel(1, rng);
    PowerSplit ps{0.3, 0.7, 2.0, 1.0};
    PhaseShiftVector start = PhaseShiftVector::ones(1);
    const double before = full_sum_rate(ch, ps, start, 0, 1);
    BeamformingConfig cfg;
    auto rng_beam = rng.fork(7);
    const auto res = passive_beamforming(ch, ps, start, 0.0, cfg, rng_beam);
    const auto cm = build_cascade_matrices(cascade_vector(ch.g_sat_ris, ch.f_ris_gt[0]),
                                           cascade_vector(ch.g_sat_ris, ch.f_ris_gt[1]), ps);
    CHECK(ris_only_rate(res.phases, cm, 1.0) ==
          doctest::Approx(ris_only_rate(start, cm, 1.0)).epsilon(1e-9));
    CHECK(res.rate_full >= before - 1e-12);
}

TEST_CASE("full CCP+randomization lands within 5 percent of the M = 2 oracle")
{
    SplitMix64 rng(44);
    double ratio_sum = 0.0;
    const int n = 60;
    for (int inst = 0; inst < n; ++inst) {
        auto ch = synthetic_channel(2, rng, 0.0, 1.0); // no direct link: pure Step-2 compare
        PowerSplit ps{0.3, 0.7, 2.0, 1.0};
        const auto cm = build_cascade_matrices(cascade_vector(ch.g_sat_ris, ch.f_ris_gt[0]),
                                               cascade_vector(ch.g_sat_ris, ch.f_ris_gt[1]), ps);
        const auto grid = beamforming_oracle_grid(ch, ps, 720);
        const double grid_rate = ris_only_rate(grid, cm, 1.0);
        PhaseShiftVector start = PhaseShiftVector::random(2, rng);
        BeamformingConfig cfg;
        auto rng_beam = rng.fork(inst);
        const auto res = passive_beamforming(ch, ps, start, 0.0, cfg, rng_beam);
        ratio_sum += (grid_rate > 0) ? std::min(1.0, res.rate_ris / grid_rate) : 1.0;
    }
    CHECK(ratio_sum / n >= 0.95);
}

TEST_CASE("oracle grid refinement is stable and bounded by the relaxation")
{
    SplitMix64 rng(45);
    auto ch = synthetic_channel(2, rng);
    PowerSplit ps{0.3, 0.7, 2.0, 1.0};
    const auto cm = build_cascade_matrices(cascade_vector(ch.g_sat_ris, ch.f_ris_gt[0]),
                                           cascade_vector(ch.g_sat_ris, ch.f_ris_gt[1]), ps);
    const double coarse = ris_only_rate(beamforming_oracle_grid(ch, ps, 360), cm, 1.0);
    const double fine = ris_only_rate(beamforming_oracle_grid(ch, ps, 720), cm, 1.0);
    CHECK(std::abs(coarse - fine) < 1e-3 * (1.0 + fine));

    const Eigen::VectorXcd ones_xi = Eigen::VectorXcd::Ones(2);
    const auto lm = ccp_linearize((ones_xi * ones_xi.adjoint()).eval(), cm, 1.0);
    const auto sol = solve_sdp_subproblem(lm, cm, 0.0, 1.0, 2);
    // The relaxation bound must sit above any grid point of the surrogate.
    const auto grid = beamforming_oracle_grid(ch, ps, 720);
    const Eigen::VectorXcd gx = grid.alphas.conjugate();
    CHECK(sol.upper_bound >=
          surrogate_objective((gx * gx.adjoint()).eval(), cm, lm, 1.0) - 1e-8);

    auto ch1 = synthetic_channel(1, rng);
    const auto single = beamforming_oracle_grid(ch1, ps, 360);
    CHECK(single.alphas.size() == 1);
    CHECK(std::abs(single.alphas[0] - std::complex<double>(1.0, 0.0)) < 1e-12);

    auto ch4 = synthetic_channel(4, rng);
    CHECK_THROWS_AS(beamforming_oracle_grid(ch4, ps, 360), std::invalid_argument);
}

TEST_CASE("rank-one penalty variant drives the lifted solution toward rank one")
{
    SplitMix64 rng(46);
    auto ch = synthetic_channel(4, rng, 0.5, 1.0);
    PowerSplit ps{0.3, 0.7, 2.0, 1.0};
    PhaseShiftVector start = PhaseShiftVector::ones(4);
    BeamformingConfig plain;
    BeamformingConfig pen = plain;
    pen.rank_one_penalty = true;
    auto r1 = rng.fork(1), r2 = rng.fork(2);
    const auto res_plain = passive_beamforming(ch, ps, start, 0.0, plain, r1);
    const auto res_pen = passive_beamforming(ch, ps, start, 0.0, pen, r2);
    // Both improve on the start; the penalized variant stays feasible and
    // close to the plain one.
    CHECK(res_pen.rate_full >= full_sum_rate(ch, ps, start, 0, 1) - 1e-12);
    CHECK(res_pen.phases.unit_modulus(1e-9));
    if (res_pen.xi.size() > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(res_pen.xi);
        const double dominance = es.eigenvalues()(3) / es.eigenvalues().sum();
        CHECK(dominance > 0.5);
    }
    CHECK(res_pen.rate_ris >= 0.80 * res_plain.rate_ris);
}

TEST_CASE("QoS floor: feasible thresholds bind, impossible ones trigger the fallback")
{
    SplitMix64 rng(47);
    auto ch = synthetic_channel(6, rng, 0.2, 1.0);
    PowerSplit ps{0.3, 0.7, 2.0, 1.0};

    // A floor the aligned pattern can meet.
    PhaseShiftVector start = PhaseShiftVector::ones(6);
    BeamformingConfig cfg;
    auto rb = rng.fork(3);
    const auto ok = passive_beamforming(ch, ps, start, 0.05, cfg, rb);
    CHECK(ok.rate_full >= full_sum_rate(ch, ps, start, 0, 1) - 1e-12);

    // An impossible floor: the weak terminal's interference-limited SINR
    // cannot exceed rho_j / rho_i.
    auto rb2 = rng.fork(4);
    const double impossible = ps.rho_j / ps.rho_i * 1.5;
    const auto relaxed = passive_beamforming(ch, ps, start, impossible, cfg, rb2);
    CHECK(relaxed.qos_relaxed);
    CHECK(relaxed.rate_full >= full_sum_rate(ch, ps, start, 0, 1) - 1e-12);
}
