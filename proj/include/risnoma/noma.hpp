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

#include <cmath>
#include <optional>
#include <utility>

#include "risnoma/common.hpp"

namespace risnoma {

/// NOMA power split. rho_i belongs to the strong (SIC-capable) terminal,
/// rho_j to the weak one; p_l_w is the satellite transmit power and p_c_w
/// the fixed circuit power entering the efficiency denominator.
struct PowerSplit {
    double rho_i = 0.0;
    double rho_j = 0.0;
    double p_l_w = 0.0;
    double p_c_w = 1.0;

    double total_radiated_w() const { return p_l_w * (rho_i + rho_j); }
};

/// Minimum-SINR quality-of-service requirement; optionally derived from a
/// per-terminal rate target over a given bandwidth.
struct QosSpec {
    double min_sinr = 0.0;
    std::optional<double> derived_from_rate_bps;
    double bandwidth_hz = 20e6;
};

/// Squared magnitudes of the composite channels, ordered strong-first.
struct EffectiveGains {
    double o_i = 0.0; // strong
    double o_j = 0.0; // weak
};

struct SicOrder {
    int strong_index = 0;
    int weak_index = 1;
    EffectiveGains gains;
};

/// Sort two effective power gains for SIC decoding. Ties keep the original
/// index order so repeated runs stay deterministic.
inline SicOrder sic_order(double gain_0, double gain_1)
{
    require(gain_0 >= 0 && gain_1 >= 0, "sic_order: gains must be >= 0");
    SicOrder ord;
    if (gain_1 > gain_0) {
        ord.strong_index = 1;
        ord.weak_index = 0;
        ord.gains = {gain_1, gain_0};
    } else {
        ord.strong_index = 0;
        ord.weak_index = 1;
        ord.gains = {gain_0, gain_1};
    }
    return ord;
}

/// SINR of the strong terminal (interference removed by SIC).
inline double sinr_strong(const PowerSplit& ps, const EffectiveGains& gains, double sigma2)
{
    require(sigma2 > 0, "sinr_strong: sigma2 must be > 0");
    return ps.p_l_w * ps.rho_i * gains.o_i / sigma2;
}

/// SINR of the weak terminal; the strong terminal's share acts as
/// interference, capping the value below rho_j/rho_i for any finite power.
inline double sinr_weak(const PowerSplit& ps, const EffectiveGains& gains, double sigma2)
{
    require(sigma2 > 0, "sinr_weak: sigma2 must be > 0");
    return ps.p_l_w * ps.rho_j * gains.o_j / (sigma2 + ps.p_l_w * ps.rho_i * gains.o_j);
}

/// Shannon rate in bits/s/Hz.
inline double rate(double sinr)
{
    if (sinr < 0) fail_invalid("rate: sinr must be >= 0");
    return std::log2(1.0 + sinr);
}

/// Sum rate divided by total consumed power, in bits/s/Hz per Watt.
inline double energy_efficiency(double rate_sum, const PowerSplit& ps)
{
    const double denom = ps.total_radiated_w() + ps.p_c_w;
    if (denom <= 0) fail_invalid("energy_efficiency: total power must be > 0");
    return rate_sum / denom;
}

/// Convert a rate requirement into the equivalent SINR threshold.
inline double qos_rate_to_sinr(double rate_bps, double bandwidth_hz)
{
    require(bandwidth_hz > 0, "qos_rate_to_sinr: bandwidth must be > 0");
    return std::exp2(rate_bps / bandwidth_hz) - 1.0;
}

/// Check the full constraint set: both QoS thresholds, the power budget,
/// the unit split cap and the per-coefficient box.
inline bool satisfies_constraints(const PowerSplit& ps, const EffectiveGains& gains,
                                  double sigma2, double gamma_min, double p_budget_w,
                                  double tol = 1e-9)
{
    if (ps.rho_i < -tol || ps.rho_i > 1 + tol) return false;
    if (ps.rho_j < -tol || ps.rho_j > 1 + tol) return false;
    if (ps.rho_i + ps.rho_j > 1 + tol) return false;
    if (ps.total_radiated_w() < -tol || ps.total_radiated_w() > p_budget_w + tol) return false;
    const double rel = 1.0 + tol;
    if (sinr_strong(ps, gains, sigma2) * rel < gamma_min) return false;
    if (sinr_weak(ps, gains, sigma2) * rel < gamma_min) return false;
    return true;
}

} // namespace risnoma
