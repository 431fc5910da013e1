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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "risnoma/common.hpp"
#include "risnoma/noma.hpp"

namespace risnoma {

/// Coefficients of the concave lower bound
///   psi * log2(gamma) + omega <= log2(1 + gamma),
/// tight at the expansion point.
struct ScaCoefficients {
    double psi_i = 0.0;
    double psi_j = 0.0;
    double omega_i = 0.0;
    double omega_j = 0.0;
};

/// Multipliers for the two QoS constraints, the power budget and the unit
/// split cap, updated by a diminishing-step projected subgradient.
struct DualVariables {
    std::array<double, 4> lambda = {0.0, 0.0, 0.0, 0.0};
    double step_c = 0.1;
};

enum class AllocStatus { converged, max_iters, infeasible };

struct DinkelbachRecord {
    double phi = 0.0;
    double eta = 0.0;
    double rho_i = 0.0;
    double rho_j = 0.0;
};

struct DinkelbachState {
    double phi = 0.0;
    double eta = 0.0;
    int iteration = 0;
    AllocStatus status = AllocStatus::converged;
    std::vector<DinkelbachRecord> trace;
};

struct PowerAllocConfig {
    double p_l_w = 1.0;     // satellite transmit power
    double p_t_w = 1.0;     // power budget
    double p_c_w = 1.0;     // circuit power
    double sigma2_w = 1.0;  // noise power
    double gamma_min = 0.0; // per-terminal SINR floor
    double tol_eta = 1e-4;
    int max_dinkelbach = 20;
    int sca_iters = 10;
    double sca_tol = 1e-5;
    int dual_steps = 500;
    double dual_step_c = 0.1;
    double eps = 1e-6;  // rho clamp keeping the logs finite
    double phi0 = 0.0;
};

inline ScaCoefficients sca_coefficients(double gamma_i, double gamma_j)
{
    require(gamma_i > 0 && gamma_j > 0, "sca_coefficients: SINRs must be > 0");
    ScaCoefficients c;
    c.psi_i = gamma_i / (1.0 + gamma_i);
    c.psi_j = gamma_j / (1.0 + gamma_j);
    c.omega_i = std::log2(1.0 + gamma_i) - c.psi_i * std::log2(gamma_i);
    c.omega_j = std::log2(1.0 + gamma_j) - c.psi_j * std::log2(gamma_j);
    return c;
}

/// Surrogate sum capacity at a given split.
inline double sca_surrogate(const PowerSplit& ps, const ScaCoefficients& sca,
                            const EffectiveGains& gains, double sigma2)
{
    const double gi = sinr_strong(ps, gains, sigma2);
    const double gj = sinr_weak(ps, gains, sigma2);
    if (gi <= 0 || gj <= 0)
        throw std::domain_error("sca_surrogate: log of non-positive SINR");
    return sca.psi_i * std::log2(gi) + sca.omega_i + sca.psi_j * std::log2(gj) + sca.omega_j;
}

/// Constraint slacks in the order (QoS strong, QoS weak, power budget,
/// unit split). Positive means satisfied.
inline std::array<double, 4> constraint_slacks(const PowerSplit& ps,
                                               const EffectiveGains& gains, double sigma2,
                                               double gamma_min, double p_t_w)
{
    const double delta = ps.rho_i + ps.rho_j;
    return {
        ps.p_l_w * ps.rho_i * gains.o_i - gamma_min * sigma2,
        ps.p_l_w * ps.rho_j * gains.o_j -
            gamma_min * (sigma2 + ps.p_l_w * ps.rho_i * gains.o_j),
        p_t_w - ps.p_l_w * delta,
        1.0 - delta,
    };
}

/// Full Lagrangian of the surrogate problem: surrogate capacity minus the
/// phi-weighted power, plus the four multiplier-weighted slacks.
inline double lagrangian_value(const PowerSplit& ps, const DualVariables& duals,
                               const ScaCoefficients& sca, const EffectiveGains& gains,
                               double phi, double gamma_min, double sigma2, double p_t_w)
{
    const double surr = sca_surrogate(ps, sca, gains, sigma2);
    const double power = ps.total_radiated_w() + ps.p_c_w;
    const auto s = constraint_slacks(ps, gains, sigma2, gamma_min, p_t_w);
    return surr - phi * power + duals.lambda[0] * s[0] + duals.lambda[1] * s[1] +
           duals.lambda[2] * s[2] + duals.lambda[3] * s[3];
}

/// Stationarity of the Lagrangian in rho_i (rho_j held fixed) reduces to the
/// quadratic a rho^2 + b rho + c = 0 with
///   K = l1 P o_i - l2 gmin P o_j - (phi + l3) P - l4,
///   a = ln2 K P o_j,  b = (psi_i - psi_j) P o_j + ln2 K s2,  c = psi_i s2.
struct KktQuadratic {
    double a = 0.0, b = 0.0, c = 0.0;

    double eval(double rho) const { return (a * rho + b) * rho + c; }
    double scale() const { return std::max({std::abs(a), std::abs(b), std::abs(c)}); }
};

inline KktQuadratic kkt_quadratic(const DualVariables& duals, const ScaCoefficients& sca,
                                  const EffectiveGains& gains, double phi, double p_l_w,
                                  double sigma2, double gamma_min)
{
    const double ln2 = std::log(2.0);
    const double k = duals.lambda[0] * p_l_w * gains.o_i -
                     duals.lambda[1] * gamma_min * p_l_w * gains.o_j -
                     (phi + duals.lambda[2]) * p_l_w - duals.lambda[3];
    KktQuadratic q;
    q.a = ln2 * k * p_l_w * gains.o_j;
    q.b = (sca.psi_i - sca.psi_j) * p_l_w * gains.o_j + ln2 * k * sigma2;
    q.c = sca.psi_i * sigma2;
    return q;
}

/// Closed-form roots (A +/- sqrt(B))/C of the stationarity quadratic, kept
/// only when they land inside (0, 1). A negative discriminant yields no
/// roots; a vanishing leading coefficient falls back to the linear solve.
inline std::vector<double> kkt_root(const DualVariables& duals, const ScaCoefficients& sca,
                                    const EffectiveGains& gains, double phi, double p_l_w,
                                    double sigma2, double gamma_min)
{
    const KktQuadratic q = kkt_quadratic(duals, sca, gains, phi, p_l_w, sigma2, gamma_min);
    std::vector<double> roots;
    auto keep = [&roots](double r) {
        if (r > 0.0 && r < 1.0) roots.push_back(r);
    };
    const double scale = q.scale();
    if (scale == 0.0) return roots;
    if (std::abs(q.a) <= 1e-14 * scale) {
        if (std::abs(q.b) > 1e-14 * scale) keep(-q.c / q.b);
        return roots;
    }
    double disc = q.b * q.b - 4.0 * q.a * q.c; // the B under the radical
    if (disc < 0.0 && disc > -1e-12 * scale * scale) disc = 0.0; // roundoff repeated root
    if (disc < 0.0) return roots;
    const double sq = std::sqrt(disc);
    if (std::abs(q.b) <= 1e-300) {
        keep(sq / (2.0 * q.a));
        keep(-sq / (2.0 * q.a));
    } else {
        // Citardauq pairing avoids cancellation between -b and sqrt(disc).
        const double u = -0.5 * (q.b + std::copysign(sq, q.b));
        keep(u / q.a);
        if (std::abs(u) > 1e-300) keep(q.c / u);
    }
    if (roots.size() == 2 && std::abs(roots[0] - roots[1]) < 1e-15) roots.pop_back();
    return roots;
}

/// Everything select_root needs to score a candidate split.
struct RootSelectionContext {
    DualVariables duals;
    ScaCoefficients sca;
    EffectiveGains gains;
    double phi = 0.0;
    double gamma_min = 0.0;
    double sigma2 = 1.0;
    double p_t_w = 1.0;
    double p_l_w = 1.0;
    double p_c_w = 1.0;
    double eps = 1e-6;
};

/// Complete each candidate with rho_j = 1 - rho_i, score by the Lagrangian,
/// and return the best. Out-of-range candidates are discarded; when nothing
/// is left a coarse boundary scan {eps, 1/2, 1-eps} stands in.
inline PowerSplit select_root(const std::vector<double>& candidates,
                              const RootSelectionContext& ctx)
{
    std::vector<double> pool;
    for (double c : candidates)
        if (c > 0.0 && c < 1.0) pool.push_back(std::clamp(c, ctx.eps, 1.0 - ctx.eps));
    if (pool.empty()) pool = {ctx.eps, 0.5, 1.0 - ctx.eps};

    PowerSplit best;
    double best_value = -std::numeric_limits<double>::infinity();
    for (double rho : pool) {
        PowerSplit ps{rho, 1.0 - rho, ctx.p_l_w, ctx.p_c_w};
        const double value = lagrangian_value(ps, ctx.duals, ctx.sca, ctx.gains, ctx.phi,
                                              ctx.gamma_min, ctx.sigma2, ctx.p_t_w);
        if (value > best_value) {
            best_value = value;
            best = ps;
        }
    }
    return best;
}

/// Projected subgradient step lambda <- max(0, lambda - (c/sqrt(k)) slack).
inline DualVariables dual_update(const DualVariables& duals, const std::array<double, 4>& slacks,
                                 int k)
{
    require(k >= 1, "dual_update: iteration index must be >= 1");
    DualVariables out = duals;
    const double step = duals.step_c / std::sqrt(double(k));
    for (int q = 0; q < 4; ++q)
        out.lambda[q] = std::max(0.0, duals.lambda[q] - step * slacks[q]);
    return out;
}

namespace detail {

/// Feasible rho_i interval [lo, hi] on the full-power line rho_j = 1 - rho_i.
inline bool qos_interval(const EffectiveGains& gains, double p_l_w, double sigma2,
                         double gamma_min, double& lo, double& hi)
{
    if (gamma_min <= 0.0) {
        lo = 0.0;
        hi = 1.0;
        return true;
    }
    if (gains.o_i <= 0.0 || gains.o_j <= 0.0) return false;
    lo = gamma_min * sigma2 / (p_l_w * gains.o_i);
    hi = (p_l_w * gains.o_j - gamma_min * sigma2) / (p_l_w * gains.o_j * (1.0 + gamma_min));
    return lo <= hi + 1e-12 && lo < 1.0 && hi > 0.0;
}

inline double sum_rate(double rho_i, const EffectiveGains& gains, double p_l_w, double sigma2)
{
    PowerSplit ps{rho_i, 1.0 - rho_i, p_l_w, 0.0};
    return rate(sinr_strong(ps, gains, sigma2)) + rate(sinr_weak(ps, gains, sigma2));
}

/// Derivative of the surrogate Lagrangian restricted to the full-power line
/// rho_j = 1 - rho_i, with the unit-split multiplier eliminated through the
/// rho_j stationarity condition (its slack is identically zero, so the
/// subgradient cannot set it). Zeros of this function are exactly the
/// closed-form roots evaluated at the self-consistent lambda_4.
inline double line_lagrangian_derivative(double rho, const ScaCoefficients& sca,
                                         const EffectiveGains& g, double lam1, double lam2,
                                         double p, double sigma2, double gamma_min)
{
    const double ln2 = std::log(2.0);
    return sca.psi_i / (ln2 * rho) -
           sca.psi_j * p * g.o_j / (ln2 * (sigma2 + p * rho * g.o_j)) -
           sca.psi_j / (ln2 * (1.0 - rho)) + lam1 * p * g.o_i -
           lam2 * (1.0 + gamma_min) * p * g.o_j;
}

/// Sign-change roots of f on (lo, hi): coarse scan plus bisection.
template <typename F>
std::vector<double> scan_bisect_roots(F&& f, double lo, double hi, int n = 48)
{
    std::vector<double> roots;
    double x_prev = lo, f_prev = f(lo);
    for (int i = 1; i <= n; ++i) {
        const double x = lo + (hi - lo) * double(i) / n;
        const double fx = f(x);
        if (f_prev == 0.0) roots.push_back(x_prev);
        if (f_prev * fx < 0.0) {
            double a = x_prev, b = x, fa = f_prev;
            for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = f(m);
                if (fa * fm <= 0.0)
                    b = m;
                else {
                    a = m;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        x_prev = x;
        f_prev = fx;
    }
    return roots;
}

/// All sign changes of the line derivative at fixed SCA coefficients. The
/// derivative runs from +inf at 0 to -inf at 1, so there is always at least
/// one root on (eps, 1-eps).
inline std::vector<double> line_stationary_points(const ScaCoefficients& sca,
                                                  const EffectiveGains& g, double lam1,
                                                  double lam2, double p, double sigma2,
                                                  double gamma_min, double lo, double hi)
{
    return scan_bisect_roots(
        [&](double rho) {
            return line_lagrangian_derivative(rho, sca, g, lam1, lam2, p, sigma2, gamma_min);
        },
        lo, hi);
}

/// Line derivative with the SCA coefficients refreshed at the evaluation
/// point itself. By tangency this equals the derivative of the true
/// multiplier-weighted rate, so its zeros are exactly the fixed points of
/// the SCA re-expansion iteration.
inline double self_tangent_derivative(double rho, const EffectiveGains& g, double lam1,
                                      double lam2, double p, double sigma2, double gamma_min,
                                      double p_c)
{
    PowerSplit at{rho, 1.0 - rho, p, p_c};
    const ScaCoefficients sca =
        sca_coefficients(sinr_strong(at, g, sigma2), sinr_weak(at, g, sigma2));
    return line_lagrangian_derivative(rho, sca, g, lam1, lam2, p, sigma2, gamma_min);
}

/// All fixed points of the re-expansion on (lo, hi).
inline std::vector<double> sca_fixed_points(const EffectiveGains& g, double lam1, double lam2,
                                            const PowerAllocConfig& cfg, double lo, double hi)
{
    return scan_bisect_roots(
        [&](double rho) {
            return self_tangent_derivative(rho, g, lam1, lam2, cfg.p_l_w, cfg.sigma2_w,
                                           cfg.gamma_min, cfg.p_c_w);
        },
        lo, hi);
}

/// One surrogate subproblem: fixed phi, SCA re-expansions iterated to their
/// fixed point (each step locates the stationary candidates of the current
/// expansion, which the self-tangent bisection reaches directly). QoS
/// multipliers follow the projected subgradient; the final iterate is the
/// exact constrained maximizer on the full-power line.
inline double solve_sca_subproblem(double rho_init, double phi, const EffectiveGains& gains,
                                   const PowerAllocConfig& cfg, double qos_lo, double qos_hi)
{
    // The phi-weighted power term is constant on the full-power line and
    // cancels from the eliminated stationarity condition.
    (void)phi;
    const double lo = std::clamp(qos_lo, cfg.eps, 1.0 - cfg.eps);
    const double hi = std::clamp(qos_hi, cfg.eps, 1.0 - cfg.eps);
    double rho = std::clamp(rho_init, lo, hi);

    auto weighted_rate = [&](double r, double lam1, double lam2) {
        PowerSplit ps{r, 1.0 - r, cfg.p_l_w, cfg.p_c_w};
        const auto sl = constraint_slacks(ps, gains, cfg.sigma2_w, cfg.gamma_min, cfg.p_t_w);
        return sum_rate(r, gains, cfg.p_l_w, cfg.sigma2_w) + lam1 * sl[0] + lam2 * sl[1];
    };

    // Projected-subgradient pass over the QoS multipliers; each step places
    // the iterate at the best stationary candidate of the weighted objective.
    DualVariables duals;
    duals.step_c = cfg.dual_step_c;
    for (int k = 1; k <= cfg.dual_steps; ++k) {
        const auto pts =
            sca_fixed_points(gains, duals.lambda[0], duals.lambda[1], cfg, cfg.eps, 1.0 - cfg.eps);
        double cand = pts.empty() ? rho : pts.front();
        double cand_val = -std::numeric_limits<double>::infinity();
        for (double r : pts) {
            const double val = weighted_rate(r, duals.lambda[0], duals.lambda[1]);
            if (val > cand_val) {
                cand_val = val;
                cand = r;
            }
        }
        PowerSplit ps{cand, 1.0 - cand, cfg.p_l_w, cfg.p_c_w};
        const auto slacks = constraint_slacks(ps, gains, cfg.sigma2_w, cfg.gamma_min, cfg.p_t_w);
        const bool feasible = slacks[0] >= -1e-10 && slacks[1] >= -1e-10;
        const double comp =
            std::abs(duals.lambda[0] * slacks[0]) + std::abs(duals.lambda[1] * slacks[1]);
        rho = cand;
        if (feasible && comp < 1e-8 * (1.0 + std::abs(cand_val))) break;
        DualVariables next = dual_update(duals, slacks, k);
        next.lambda[2] = duals.lambda[2]; // constant slacks on the full-power line
        next.lambda[3] = duals.lambda[3];
        duals = next;
    }

    // Exact constrained maximizer: unweighted fixed points clamped into the
    // QoS interval, against the interval endpoints.
    double best_rho = lo;
    double best_val = sum_rate(lo, gains, cfg.p_l_w, cfg.sigma2_w);
    if (const double v = sum_rate(hi, gains, cfg.p_l_w, cfg.sigma2_w); v > best_val) {
        best_val = v;
        best_rho = hi;
    }
    for (double r : sca_fixed_points(gains, 0.0, 0.0, cfg, cfg.eps, 1.0 - cfg.eps)) {
        const double rc = std::clamp(r, lo, hi);
        if (const double v = sum_rate(rc, gains, cfg.p_l_w, cfg.sigma2_w); v > best_val) {
            best_val = v;
            best_rho = rc;
        }
    }
    return best_rho;
}

} // namespace detail

struct PowerAllocResult {
    PowerSplit split;
    DinkelbachState state;
};

/// Step 1: maximize energy efficiency over the NOMA split for a fixed
/// reflection pattern. Outer Dinkelbach residual iteration, inner SCA
/// subproblems solved in closed form under the dual loop. The split and
/// noise are rescaled by sigma2 internally, so badly scaled physical inputs
/// (1e-18 gains against 1e-13 noise) behave exactly like desk-scale ones.
inline PowerAllocResult dinkelbach_power_allocation(const EffectiveGains& gains_in,
                                                    const PowerAllocConfig& cfg_in)
{
    PowerAllocConfig cfg = cfg_in;
    EffectiveGains gains{gains_in.o_i / cfg_in.sigma2_w, gains_in.o_j / cfg_in.sigma2_w};
    cfg.sigma2_w = 1.0;

    PowerAllocResult out;
    out.split = PowerSplit{0.0, 0.0, cfg.p_l_w, cfg.p_c_w};

    // A dead link leaves nothing to split over.
    if (!(gains.o_i > 0.0) || !(gains.o_j > 0.0)) {
        out.state.status = AllocStatus::infeasible;
        return out;
    }

    double lo = 0.0, hi = 1.0;
    if (!detail::qos_interval(gains, cfg.p_l_w, cfg.sigma2_w, cfg.gamma_min, lo, hi)) {
        out.state.status = AllocStatus::infeasible;
        return out;
    }
    lo = std::clamp(lo, cfg.eps, 1.0 - cfg.eps);
    hi = std::clamp(hi, cfg.eps, 1.0 - cfg.eps);
    if (lo > hi) {
        out.state.status = AllocStatus::infeasible;
        return out;
    }

    const double den = cfg.p_l_w + cfg.p_c_w; // full-power line
    double rho = std::clamp(0.3, lo, hi);
    double phi = cfg.phi0;
    out.state.status = AllocStatus::max_iters;

    for (int t = 1; t <= cfg.max_dinkelbach; ++t) {
        double rho_new = detail::solve_sca_subproblem(rho, phi, gains, cfg, lo, hi);
        // Monotone safeguard on the Dinkelbach objective R - phi * power.
        if (detail::sum_rate(rho_new, gains, cfg.p_l_w, cfg.sigma2_w) <
            detail::sum_rate(rho, gains, cfg.p_l_w, cfg.sigma2_w))
            rho_new = rho;
        const double r_sum = detail::sum_rate(rho_new, gains, cfg.p_l_w, cfg.sigma2_w);
        const double eta = r_sum - phi * den;
        phi = r_sum / den;
        rho = rho_new;
        out.state.trace.push_back({phi, eta, rho, 1.0 - rho});
        out.state.iteration = t;
        out.state.eta = eta;
        if (std::abs(eta) < cfg.tol_eta) {
            out.state.status = AllocStatus::converged;
            break;
        }
    }

    out.state.phi = phi;
    out.split = PowerSplit{rho, 1.0 - rho, cfg.p_l_w, cfg.p_c_w};
    return out;
}

struct PowerOracleResult {
    PowerSplit split;
    double ee = 0.0;
    bool feasible_found = false;
};

/// Exhaustive grid reference for the Step-1 problem: maximizes the true
/// efficiency ratio over the feasible (rho_i, rho_j) box. Test oracle only.
inline PowerOracleResult power_oracle_grid(const EffectiveGains& gains,
                                           const PowerAllocConfig& cfg, int resolution)
{
    require(resolution >= 100, "power_oracle_grid: resolution must be >= 100");
    PowerOracleResult best;
    const double p = cfg.p_l_w;
    const double s2 = cfg.sigma2_w;
    for (int a = 0; a <= resolution; ++a) {
        const double rho_i = double(a) / resolution;
        const double qos_i = p * rho_i * gains.o_i - cfg.gamma_min * s2;
        if (qos_i < 0) continue;
        for (int b = 0; a + b <= resolution; ++b) {
            const double rho_j = double(b) / resolution;
            if (p * (rho_i + rho_j) > cfg.p_t_w * (1 + 1e-12)) continue;
            const double denom_j = s2 + p * rho_i * gains.o_j;
            const double gamma_j = p * rho_j * gains.o_j / denom_j;
            if (gamma_j < cfg.gamma_min) continue;
            const double gamma_i = p * rho_i * gains.o_i / s2;
            const double r = std::log2(1.0 + gamma_i) + std::log2(1.0 + gamma_j);
            const double ee = r / (p * (rho_i + rho_j) + cfg.p_c_w);
            if (!best.feasible_found || ee > best.ee) {
                best.feasible_found = true;
                best.ee = ee;
                best.split = PowerSplit{rho_i, rho_j, p, cfg.p_c_w};
            }
        }
    }
    return best;
}

} // namespace risnoma
