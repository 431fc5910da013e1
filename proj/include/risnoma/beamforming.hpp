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

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "risnoma/channel.hpp"
#include "risnoma/common.hpp"
#include "risnoma/noma.hpp"
#include "risnoma/rng.hpp"
#include "risnoma/sdp.hpp"

namespace risnoma {

/// Outer-product matrices of the Step-2 problem. g_i and g_j carry the own
/// signal powers P rho, g_bar_j the interference weight seen by the weak
/// terminal. All three are rank-one by construction.
struct CascadeMatrices {
    Eigen::VectorXcd h_hat_i;
    Eigen::VectorXcd h_hat_j;
    double p_rho_i = 0.0; // P_l * rho_i
    double p_rho_j = 0.0; // P_l * rho_j
    Eigen::MatrixXcd g_i;
    Eigen::MatrixXcd g_j;
    Eigen::MatrixXcd g_bar_j;

    double trace_gi(const Eigen::MatrixXcd& xi) const
    {
        return p_rho_i * std::real(h_hat_i.dot(xi * h_hat_i));
    }
    double trace_gj(const Eigen::MatrixXcd& xi) const
    {
        return p_rho_j * std::real(h_hat_j.dot(xi * h_hat_j));
    }
    double trace_gbar_j(const Eigen::MatrixXcd& xi) const
    {
        return p_rho_i * std::real(h_hat_j.dot(xi * h_hat_j));
    }
};

inline CascadeMatrices build_cascade_matrices(const Eigen::VectorXcd& h_hat_i,
                                              const Eigen::VectorXcd& h_hat_j,
                                              const PowerSplit& ps)
{
    require(h_hat_i.size() == h_hat_j.size(),
            "build_cascade_matrices: cascade vectors must have equal length");
    CascadeMatrices cm;
    cm.h_hat_i = h_hat_i;
    cm.h_hat_j = h_hat_j;
    cm.p_rho_i = ps.p_l_w * ps.rho_i;
    cm.p_rho_j = ps.p_l_w * ps.rho_j;
    cm.g_i = cm.p_rho_i * (h_hat_i * h_hat_i.adjoint());
    cm.g_j = cm.p_rho_j * (h_hat_j * h_hat_j.adjoint());
    cm.g_bar_j = cm.p_rho_i * (h_hat_j * h_hat_j.adjoint());
    return cm;
}

/// Step-2 sum rate through the lifted variable, written as the four-log
/// difference form. Equals log2(1 + Tr(Xi G_i)/s2) + log2(1 + Tr(Xi G_j) /
/// (Tr(Xi Gbar_j) + s2)).
inline double dc_objective(const Eigen::MatrixXcd& xi, const CascadeMatrices& cm, double sigma2)
{
    const double ti = cm.trace_gi(xi);
    const double tj = cm.trace_gj(xi);
    const double tb = cm.trace_gbar_j(xi);
    const double a1 = sigma2 + ti;
    const double a2 = tb + sigma2 + tj;
    const double a3 = tb + sigma2;
    if (a1 <= 0 || a2 <= 0 || a3 <= 0 || sigma2 <= 0)
        throw std::domain_error("dc_objective: non-positive log argument");
    return (std::log2(a1) - std::log2(sigma2)) + (std::log2(a2) - std::log2(a3));
}

/// First-order replacement of the subtracted concave term
/// log2(Tr(Xi Gbar_j) + s2) around an expansion point. Because the term is
/// concave, the tangent over-estimates it everywhere and the resulting
/// per-iteration objective under-estimates the true one.
struct LinearMajorant {
    double value_at_k = 0.0; // log2(trace_at_k + s2)
    double slope = 0.0;      // d/dTr = 1 / (ln2 (trace_at_k + s2))
    double trace_at_k = 0.0; // Tr(Xi_k Gbar_j)

    double operator()(double trace_gbar) const
    {
        return value_at_k + slope * (trace_gbar - trace_at_k);
    }
};

inline LinearMajorant ccp_linearize(const Eigen::MatrixXcd& xi_k, const CascadeMatrices& cm,
                                    double sigma2)
{
    LinearMajorant lm;
    lm.trace_at_k = cm.trace_gbar_j(xi_k);
    const double base = lm.trace_at_k + sigma2;
    require(base > 0, "ccp_linearize: expansion point outside the log domain");
    lm.value_at_k = std::log2(base);
    lm.slope = 1.0 / (std::log(2.0) * base);
    return lm;
}

/// Surrogate objective (the concave part plus the linearized term) at any
/// lifted point; equals dc_objective at the expansion point.
inline double surrogate_objective(const Eigen::MatrixXcd& xi, const CascadeMatrices& cm,
                                  const LinearMajorant& lm, double sigma2)
{
    const double ti = cm.trace_gi(xi);
    const double tj = cm.trace_gj(xi);
    const double tb = cm.trace_gbar_j(xi);
    return (std::log2(sigma2 + ti) - std::log2(sigma2)) +
           (std::log2(tb + sigma2 + tj) - lm(tb));
}

enum class SolverStatus { optimal, near_optimal, infeasible };

struct SdpSolution {
    Eigen::MatrixXcd xi;
    double objective = 0.0;  // surrogate value at xi, bits/s/Hz
    double upper_bound = 0.0;
    double gap = 0.0;
    SolverStatus status = SolverStatus::infeasible;
};

/// One convex subproblem of the concave-convex procedure: the rank
/// constraint is dropped, the subtracted log is linearized, and the QoS
/// thresholds become linear trace constraints.
inline SdpSolution solve_sdp_subproblem(const LinearMajorant& majorant,
                                        const CascadeMatrices& cm, double gamma_min_bar,
                                        double sigma2, Eigen::Index m,
                                        const Eigen::MatrixXcd* warm = nullptr,
                                        const sdp::Options& options = sdp::Options{})
{
    require(m == cm.h_hat_i.size(), "solve_sdp_subproblem: dimension mismatch");
    SdpSolution out;

    sdp::Problem pb;
    pb.m = m;
    const double inv_ln2 = 1.0 / std::log(2.0);
    pb.logs.push_back({{cm.h_hat_i, cm.p_rho_i, sigma2}, inv_ln2});
    pb.logs.push_back({{cm.h_hat_j, cm.p_rho_i + cm.p_rho_j, sigma2}, inv_ln2});
    pb.linear_atoms.push_back({cm.h_hat_j, -majorant.slope * cm.p_rho_i});
    pb.constant = -std::log2(sigma2) - majorant.value_at_k + majorant.slope * majorant.trace_at_k;
    if (gamma_min_bar > 0.0) {
        pb.ineqs.push_back({cm.h_hat_i, cm.p_rho_i, -gamma_min_bar * sigma2});
        const double own_minus_interf = cm.p_rho_j - gamma_min_bar * cm.p_rho_i;
        if (own_minus_interf <= 0.0) return out; // weak terminal can never meet the floor
        pb.ineqs.push_back({cm.h_hat_j, own_minus_interf, -gamma_min_bar * sigma2});
    }

    const sdp::Result r = sdp::maximize(pb, warm, options);
    out.xi = r.xi;
    out.objective = r.objective;
    out.upper_bound = r.upper_bound;
    out.gap = r.gap;
    switch (r.status) {
        case sdp::Status::optimal: out.status = SolverStatus::optimal; break;
        case sdp::Status::near_optimal: out.status = SolverStatus::near_optimal; break;
        case sdp::Status::infeasible: out.status = SolverStatus::infeasible; break;
    }
    return out;
}

/// RIS-only sum rate of a unit-modulus reflection vector (alphas).
inline double ris_only_rate(const PhaseShiftVector& phases, const CascadeMatrices& cm,
                            double sigma2)
{
    // xi = conj(alpha), |xi^H hhat|^2 = |sum alpha_m hhat_m|^2.
    const std::complex<double> ci = (phases.alphas.array() * cm.h_hat_i.array()).sum();
    const std::complex<double> cj = (phases.alphas.array() * cm.h_hat_j.array()).sum();
    const double u = std::norm(ci);
    const double v = std::norm(cj);
    return std::log2(1.0 + cm.p_rho_i * u / sigma2) +
           std::log2(1.0 + cm.p_rho_j * v / (cm.p_rho_i * v + sigma2));
}

inline bool ris_qos_feasible(const PhaseShiftVector& phases, const CascadeMatrices& cm,
                             double gamma_min_bar, double sigma2, double tol = 1e-9)
{
    if (gamma_min_bar <= 0) return true;
    const std::complex<double> ci = (phases.alphas.array() * cm.h_hat_i.array()).sum();
    const std::complex<double> cj = (phases.alphas.array() * cm.h_hat_j.array()).sum();
    const double u = std::norm(ci);
    const double v = std::norm(cj);
    const double rel = 1.0 + tol;
    if (cm.p_rho_i * u * rel < gamma_min_bar * sigma2) return false;
    if (cm.p_rho_j * v * rel < gamma_min_bar * (cm.p_rho_i * v + sigma2)) return false;
    return true;
}

struct RandomizationResult {
    PhaseShiftVector phases;
    double rate = 0.0; // RIS-only sum rate
    bool feasible = true;
};

/// Rank-one recovery by Gaussian randomization: draw z ~ CN(0, Xi), project
/// elementwise to the unit circle, keep the dominant eigenvector projection
/// as an extra candidate, and return the best feasible one by true rate.
inline RandomizationResult gaussian_randomization(const SdpSolution& sol,
                                                  const CascadeMatrices& cm,
                                                  double gamma_min_bar, double sigma2,
                                                  int n_samples, SplitMix64& rng)
{
    require(n_samples >= 1, "gaussian_randomization: need at least one sample");
    const Eigen::Index m = sol.xi.rows();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sol.xi);
    Eigen::VectorXd evals = es.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXcd root =
        es.eigenvectors() * evals.cwiseSqrt().asDiagonal();

    auto project = [&rng](const Eigen::VectorXcd& z) {
        Eigen::VectorXcd xi_vec(z.size());
        for (Eigen::Index k = 0; k < z.size(); ++k) {
            const double mag = std::abs(z[k]);
            xi_vec[k] = (mag > 1e-300) ? z[k] / mag
                                       : std::polar(1.0, rng.uniform(0.0, 2.0 * pi));
        }
        return xi_vec;
    };

    std::vector<Eigen::VectorXcd> candidates;
    candidates.push_back(project(es.eigenvectors().col(m - 1))); // dominant eigenvector
    for (int s = 0; s < n_samples; ++s) {
        Eigen::VectorXcd w(m);
        for (Eigen::Index k = 0; k < m; ++k) w[k] = rng.cgauss();
        candidates.push_back(project(root * w));
    }

    RandomizationResult best_feasible, best_any;
    best_feasible.rate = best_any.rate = -1.0;
    for (const auto& xi_vec : candidates) {
        PhaseShiftVector p;
        p.alphas = xi_vec.conjugate();
        const double r = ris_only_rate(p, cm, sigma2);
        const bool ok = ris_qos_feasible(p, cm, gamma_min_bar, sigma2);
        if (ok && r > best_feasible.rate) best_feasible = {p, r, true};
        if (r > best_any.rate) best_any = {p, r, ok};
    }
    if (best_feasible.rate >= 0.0) return best_feasible;
    best_any.feasible = false;
    return best_any;
}

struct BeamformingConfig {
    int ccp_iters = 10;
    double ccp_tol = 1e-4;
    int randomization_samples = 200;
    double sdp_gap = 1e-8;
    bool rank_one_penalty = false;
    double penalty_mu = 10.0;
};

enum class BeamStatus { improved, kept_incoming, infeasible_relaxed };

struct BeamformingResult {
    PhaseShiftVector phases;
    double rate_full = 0.0; // sum rate including the direct links
    double rate_ris = 0.0;  // Step-2 objective value at the returned phases
    bool qos_relaxed = false;
    BeamStatus status = BeamStatus::kept_incoming;
    std::vector<double> ccp_objective_trace; // true objective per iteration
    Eigen::MatrixXcd xi;                     // final lifted solution
};

/// Full sum rate (direct links included) of a phase vector for a given split.
inline double full_sum_rate(const ChannelRealization& ch, const PowerSplit& ps,
                            const PhaseShiftVector& phases, int strong, int weak)
{
    const double oi =
        std::norm(effective_gain(ch.h_direct[strong], ch.g_sat_ris, phases, ch.f_ris_gt[strong]));
    const double oj =
        std::norm(effective_gain(ch.h_direct[weak], ch.g_sat_ris, phases, ch.f_ris_gt[weak]));
    const EffectiveGains g{oi, oj};
    return rate(sinr_strong(ps, g, ch.noise_power_w)) + rate(sinr_weak(ps, g, ch.noise_power_w));
}

namespace detail {

/// Penalized subproblem on the bordered matrix [[Xi, xihat],[xihat^H, 1]]:
/// the Schur-complement certificate of Xi >= xihat xihat^H, with the
/// concave penalty mu ||xihat||^2 linearized at the previous xihat.
inline SdpSolution solve_penalized_subproblem(const LinearMajorant& majorant,
                                              const CascadeMatrices& cm, double gamma_min_bar,
                                              double sigma2, const Eigen::VectorXcd& xihat_k,
                                              double mu, const Eigen::MatrixXcd* warm,
                                              const sdp::Options& options)
{
    const Eigen::Index m = cm.h_hat_i.size();
    const Eigen::Index mb = m + 1;
    auto pad = [m](const Eigen::VectorXcd& h) {
        Eigen::VectorXcd hb = Eigen::VectorXcd::Zero(m + 1);
        hb.head(m) = h;
        return hb;
    };

    sdp::Problem pb;
    pb.m = mb;
    const double inv_ln2 = 1.0 / std::log(2.0);
    const Eigen::VectorXcd hi = pad(cm.h_hat_i);
    const Eigen::VectorXcd hj = pad(cm.h_hat_j);
    pb.logs.push_back({{hi, cm.p_rho_i, sigma2}, inv_ln2});
    pb.logs.push_back({{hj, cm.p_rho_i + cm.p_rho_j, sigma2}, inv_ln2});
    pb.linear_atoms.push_back({hj, -majorant.slope * cm.p_rho_i});
    pb.linear = Eigen::MatrixXcd::Zero(mb, mb);
    pb.linear.block(0, m, m, 1) = mu * xihat_k;
    pb.linear.block(m, 0, 1, m) = mu * xihat_k.adjoint();
    pb.constant = -std::log2(sigma2) - majorant.value_at_k +
                  majorant.slope * majorant.trace_at_k - mu * double(m) -
                  mu * xihat_k.squaredNorm();
    if (gamma_min_bar > 0.0) {
        pb.ineqs.push_back({hi, cm.p_rho_i, -gamma_min_bar * sigma2});
        const double own_minus_interf = cm.p_rho_j - gamma_min_bar * cm.p_rho_i;
        if (own_minus_interf <= 0.0) return SdpSolution{};
        pb.ineqs.push_back({hj, own_minus_interf, -gamma_min_bar * sigma2});
    }

    const sdp::Result r = sdp::maximize(pb, warm, options);
    SdpSolution out;
    out.xi = r.xi;
    out.objective = r.objective;
    out.upper_bound = r.upper_bound;
    out.gap = r.gap;
    out.status = (r.status == sdp::Status::infeasible)     ? SolverStatus::infeasible
                 : (r.status == sdp::Status::near_optimal) ? SolverStatus::near_optimal
                                                           : SolverStatus::optimal;
    return out;
}

} // namespace detail

/// Step 2: given the power split, improve the reflection phases. CCP outer
/// loop over linearizations, semidefinite relaxation inside, Gaussian
/// randomization back to unit modulus, and a monotone safeguard on the full
/// sum rate so the alternating trace never regresses.
inline BeamformingResult passive_beamforming(const ChannelRealization& ch, const PowerSplit& ps,
                                             const PhaseShiftVector& incoming,
                                             double gamma_min_bar, const BeamformingConfig& cfg,
                                             SplitMix64& rng, int strong = 0, int weak = 1)
{
    const Eigen::Index m = ch.g_sat_ris.size();
    const double sigma2 = ch.noise_power_w;
    BeamformingResult res;
    res.phases = incoming;
    res.rate_full = full_sum_rate(ch, ps, incoming, strong, weak);

    if (m == 0) return res;
    const Eigen::VectorXcd hhat_i = cascade_vector(ch.g_sat_ris, ch.f_ris_gt[strong]);
    const Eigen::VectorXcd hhat_j = cascade_vector(ch.g_sat_ris, ch.f_ris_gt[weak]);
    const CascadeMatrices cm = build_cascade_matrices(hhat_i, hhat_j, ps);
    res.rate_ris = ris_only_rate(incoming, cm, sigma2);

    const double cascade_power =
        cm.p_rho_i * hhat_i.squaredNorm() + cm.p_rho_j * hhat_j.squaredNorm();
    if (!(cascade_power > 0) || !(sigma2 > 0)) return res; // nothing to optimize

    sdp::Options options;
    options.gap_tol = cfg.sdp_gap;

    // Lift the incoming phases; a small identity blend keeps the start
    // strictly inside the cone.
    const Eigen::VectorXcd xi_in = incoming.alphas.conjugate();
    Eigen::MatrixXcd xi = 0.95 * (xi_in * xi_in.adjoint()) +
                          0.05 * Eigen::MatrixXcd::Identity(m, m);
    sdp::detail::unit_diag_hermitize(xi);

    double gbar = gamma_min_bar;
    double prev_true = -1.0;
    SdpSolution last;
    bool have_solution = false;
    for (int it = 0; it < cfg.ccp_iters; ++it) {
        const LinearMajorant lm = ccp_linearize(xi, cm, sigma2);
        sdp::Options stage = options;
        stage.warm_start_gap = have_solution ? 1e-3 : 0.0;
        SdpSolution sol = solve_sdp_subproblem(lm, cm, gbar, sigma2, m, &xi, stage);
        if (sol.status == SolverStatus::infeasible) {
            if (gbar > 0.0) {
                gbar = 0.0; // spec'd fallback: relax the Step-2 QoS floor
                res.qos_relaxed = true;
                continue;
            }
            break;
        }
        const double tru = dc_objective(sol.xi, cm, sigma2);
        if (it > 0 && tru < prev_true - 1e-9 * (1.0 + std::abs(prev_true))) break;
        xi = sol.xi;
        last = sol;
        have_solution = true;
        res.ccp_objective_trace.push_back(tru);
        if (it > 0 && std::abs(tru - prev_true) < cfg.ccp_tol) {
            prev_true = tru;
            break;
        }
        prev_true = tru;
    }

    // Optional refinement through the Schur-complement certificate: a short
    // penalized pass pulls the converged lifted solution toward rank one,
    // re-linearizing the penalty proxy at each step.
    if (cfg.rank_one_penalty && have_solution) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(xi);
        Eigen::VectorXcd xihat =
            std::sqrt(std::max(0.0, es.eigenvalues()(m - 1))) * es.eigenvectors().col(m - 1);
        for (int it = 0; it < 4; ++it) {
            const LinearMajorant lm = ccp_linearize(xi, cm, sigma2);
            sdp::Options stage = options;
            stage.warm_start_gap = 1e-3;
            SdpSolution sol = detail::solve_penalized_subproblem(lm, cm, gbar, sigma2, xihat,
                                                                 cfg.penalty_mu, nullptr, stage);
            if (sol.status == SolverStatus::infeasible) break;
            Eigen::MatrixXcd xi_new = sol.xi.topLeftCorner(m, m).eval();
            sdp::detail::unit_diag_hermitize(xi_new);
            const double tru = dc_objective(xi_new, cm, sigma2);
            // Keep the refinement only while it does not cost measurable rate.
            if (tru < prev_true - 0.02 * (1.0 + std::abs(prev_true))) break;
            xihat = sol.xi.block(0, m, m, 1);
            xi = xi_new;
            last.xi = xi;
            const bool settled = std::abs(tru - prev_true) < cfg.ccp_tol;
            prev_true = tru;
            if (settled) break;
        }
    }

    if (have_solution) {
        last.xi = xi;
        const auto rec =
            gaussian_randomization(last, cm, gbar, sigma2, cfg.randomization_samples, rng);
        // The Step-2 objective is invariant under a common rotation of all
        // phases, but the composite channels h + g Theta f are not: spend
        // the free global phase on the full-rate objective.
        PhaseShiftVector polished = rec.phases;
        {
            double best_rate = -1.0, best_phi = 0.0;
            auto rate_at = [&](double phi) {
                PhaseShiftVector cand;
                cand.alphas = rec.phases.alphas * std::polar(1.0, phi);
                return full_sum_rate(ch, ps, cand, strong, weak);
            };
            const int coarse = 64;
            for (int k = 0; k < coarse; ++k) {
                const double phi = 2.0 * pi * k / coarse;
                const double r = rate_at(phi);
                if (r > best_rate) {
                    best_rate = r;
                    best_phi = phi;
                }
            }
            const double span = 2.0 * pi / coarse;
            for (int k = -16; k <= 16; ++k) {
                const double phi = best_phi + span * k / 16.0;
                const double r = rate_at(phi);
                if (r > best_rate) {
                    best_rate = r;
                    best_phi = phi;
                }
            }
            polished.alphas = rec.phases.alphas * std::polar(1.0, best_phi);
        }
        const double full_new = full_sum_rate(ch, ps, polished, strong, weak);
        if (full_new >= res.rate_full) {
            res.phases = polished;
            res.rate_full = full_new;
            res.rate_ris = rec.rate;
            res.status = BeamStatus::improved;
            res.xi = xi;
            if (!rec.feasible && gbar > 0) res.qos_relaxed = true;
        }
    }
    if (res.status != BeamStatus::improved && res.qos_relaxed)
        res.status = BeamStatus::infeasible_relaxed;
    return res;
}

/// Exhaustive reference for tiny surfaces: uniform phase grid per element
/// with the first element pinned (a global phase is immaterial). Maximizes
/// the true Step-2 objective.
inline PhaseShiftVector beamforming_oracle_grid(const ChannelRealization& ch,
                                                const PowerSplit& ps, int grid_points,
                                                int strong = 0, int weak = 1)
{
    const Eigen::Index m = ch.g_sat_ris.size();
    require(m >= 1 && m <= 3, "beamforming_oracle_grid: supported only for M <= 3");
    require(grid_points >= 8, "beamforming_oracle_grid: grid too coarse");
    const Eigen::VectorXcd hhat_i = cascade_vector(ch.g_sat_ris, ch.f_ris_gt[strong]);
    const Eigen::VectorXcd hhat_j = cascade_vector(ch.g_sat_ris, ch.f_ris_gt[weak]);
    const CascadeMatrices cm = build_cascade_matrices(hhat_i, hhat_j, ps);

    PhaseShiftVector best = PhaseShiftVector::ones(m);
    double best_rate = ris_only_rate(best, cm, ch.noise_power_w);

    const int n1 = (m >= 2) ? grid_points : 0;
    const int n2 = (m >= 3) ? grid_points : 0;
    PhaseShiftVector cand = PhaseShiftVector::ones(m);
    for (int a = 0; a <= n1; ++a) {
        if (m >= 2) cand.alphas[1] = std::polar(1.0, 2.0 * pi * double(a) / grid_points);
        for (int b = 0; b <= n2; ++b) {
            if (m >= 3) cand.alphas[2] = std::polar(1.0, 2.0 * pi * double(b) / grid_points);
            const double r = ris_only_rate(cand, cm, ch.noise_power_w);
            if (r > best_rate) {
                best_rate = r;
                best = cand;
            }
            if (m < 3) break;
        }
        if (m < 2) break;
    }
    return best;
}

} // namespace risnoma
