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
#include <array>
#include <complex>
#include <string>

#include "risnoma/bessel.hpp"
#include "risnoma/common.hpp"
#include "risnoma/rng.hpp"

namespace risnoma {

/// Static geometry and antenna parameters of one satellite beam serving two
/// ground terminals (GTs) with one reflecting surface in between.
struct GeometryConfig {
    double sat_altitude_m = 600e3;
    std::array<double, 2> sat_gt_distance_m = {600e3, 600e3}; // satellite -> GT
    double sat_ris_distance_m = 600e3;                        // satellite -> RIS
    std::array<double, 2> ris_gt_distance_m = {25.0, 35.0};   // RIS -> GT
    std::array<double, 2> boresight_angle_rad = {0.0026, 0.0061}; // GT off-boresight
    double ris_boresight_angle_rad = 0.0040;                  // RIS off-boresight
    double theta_3db_rad = 0.0070;                            // 3 dB beamwidth angle
    double carrier_hz = 18.5e9;
    double pathloss_exponent = 2.0;  // RIS -> GT power-law exponent
    double g_max_dbi = 38.0;         // satellite gain at beam centre
    double g_rx_dbi = 10.0;          // GT receive gain
    double ris_rx_gain_dbi = 5.0;    // RIS element receive gain
    bool enforce_ka_band = true;     // require carrier in [17.7, 19.7] GHz

    void validate() const
    {
        require(sat_altitude_m > 0, "geometry.sat_altitude_m must be > 0");
        for (double d : sat_gt_distance_m)
            require(d > 0, "geometry.sat_gt_distance_m must be > 0");
        require(sat_ris_distance_m > 0, "geometry.sat_ris_distance_m must be > 0");
        for (double d : ris_gt_distance_m)
            require(d > 0, "geometry.ris_gt_distance_m must be > 0");
        for (double a : boresight_angle_rad)
            require(a >= 0 && a < pi / 2, "geometry.boresight_angle_rad must be in [0, pi/2)");
        require(ris_boresight_angle_rad >= 0 && ris_boresight_angle_rad < pi / 2,
                "geometry.ris_boresight_angle_rad must be in [0, pi/2)");
        require(theta_3db_rad > 0 && theta_3db_rad < pi / 2,
                "geometry.theta_3db_rad must be in (0, pi/2)");
        require(carrier_hz > 0, "geometry.carrier_hz must be > 0");
        if (enforce_ka_band)
            require(carrier_hz >= 17.7e9 && carrier_hz <= 19.7e9,
                    "geometry.carrier_hz outside the Ka downlink band (set enforce_ka_band "
                    "to false to override)");
        require(pathloss_exponent >= 2.0, "geometry.pathloss_exponent must be >= 2");
    }
};

/// One Monte Carlo draw of every channel the downlink needs: direct
/// satellite->GT scalars, the satellite->RIS vector and the two RIS->GT
/// vectors. All vectors share the element count M.
struct ChannelRealization {
    std::array<std::complex<double>, 2> h_direct{};  // per GT
    Eigen::VectorXcd g_sat_ris;                      // length M
    std::array<Eigen::VectorXcd, 2> f_ris_gt;        // length M, per GT
    std::array<double, 2> doppler_phase{};           // zeta per direct link
    double noise_power_w = 0.0;

    Eigen::Index elements() const { return g_sat_ris.size(); }
};

/// Satellite antenna gain (linear) at off-boresight angle theta.
/// Evaluates G_max [J1(v)/(2v) + 36 J3(v)/v^3]^2 with
/// v = 2.07123 sin(theta)/sin(theta_3dB); the v -> 0 limit of the bracket
/// is 1 - 5 v^2/64, so boresight returns exactly G_max.
inline double satellite_antenna_gain(double theta_rad, const GeometryConfig& cfg)
{
    require(theta_rad >= 0 && theta_rad < pi / 2,
            "satellite_antenna_gain: theta must be in [0, pi/2)");
    const double g_max = db_to_linear(cfg.g_max_dbi);
    const double v = 2.07123 * std::sin(theta_rad) / std::sin(cfg.theta_3db_rad);
    double bracket;
    if (v < 1e-4) {
        bracket = 1.0 - 5.0 * v * v / 64.0;
    } else {
        bracket = bessel_j(1, v) / (2.0 * v) + 36.0 * bessel_j(3, v) / (v * v * v);
    }
    return g_max * bracket * bracket;
}

/// Free-space amplitude sqrt(G_tx G_rx) * c / (4 pi f d). Squared, this is
/// the classic link budget; it is homogeneous of degree -1 in both d and f.
inline double free_space_amplitude(double g_tx_linear, double g_rx_linear,
                                   double carrier_hz, double d_m)
{
    require(d_m > 0, "free_space_amplitude: distance must be > 0");
    require(carrier_hz > 0, "free_space_amplitude: carrier must be > 0");
    const double lambda = speed_of_light_mps / carrier_hz;
    return std::sqrt(g_tx_linear * g_rx_linear) * lambda / (4.0 * pi * d_m);
}

/// Direct-link amplitude for one GT, with the satellite pattern evaluated at
/// that GT's off-boresight angle.
inline double direct_link_amplitude(const GeometryConfig& cfg, int gt_index)
{
    require(gt_index == 0 || gt_index == 1, "gt_index must be 0 or 1");
    const double g_tx = satellite_antenna_gain(cfg.boresight_angle_rad[gt_index], cfg);
    return free_space_amplitude(g_tx, db_to_linear(cfg.g_rx_dbi), cfg.carrier_hz,
                                cfg.sat_gt_distance_m[gt_index]);
}

/// Satellite->RIS per-element amplitude (line-of-sight link budget).
inline double sat_ris_amplitude(const GeometryConfig& cfg)
{
    const double g_tx = satellite_antenna_gain(cfg.ris_boresight_angle_rad, cfg);
    return free_space_amplitude(g_tx, db_to_linear(cfg.ris_rx_gain_dbi), cfg.carrier_hz,
                                cfg.sat_ris_distance_m);
}

/// h = a * exp(j pi zeta), zeta ~ U(0,2): the Doppler shift enters as one
/// static uniform phase per realization. Returns the sample and the drawn
/// zeta (kept for the record).
inline std::complex<double> sample_direct_channel(const GeometryConfig& cfg, int gt_index,
                                                  SplitMix64& rng, double* zeta_out = nullptr)
{
    const double a = direct_link_amplitude(cfg, gt_index);
    const double zeta = rng.uniform(0.0, 2.0);
    if (zeta_out) *zeta_out = zeta;
    return std::polar(a, pi * zeta);
}

/// Satellite->RIS vector: one deterministic amplitude, independent uniform
/// phases per element.
inline Eigen::VectorXcd sample_sat_ris_channel(const GeometryConfig& cfg, Eigen::Index m,
                                               SplitMix64& rng)
{
    require(m >= 1, "sample_sat_ris_channel: M must be >= 1");
    const double a = sat_ris_amplitude(cfg);
    Eigen::VectorXcd g(m);
    for (Eigen::Index k = 0; k < m; ++k)
        g[k] = std::polar(a, pi * rng.uniform(0.0, 2.0));
    return g;
}

/// RIS->GT vector: i.i.d. CN(0,1) Rayleigh fading scaled by d^(-beta/2), so
/// the mean element power is d^(-beta).
inline Eigen::VectorXcd sample_ris_gt_channel(const GeometryConfig& cfg, int gt_index,
                                              Eigen::Index m, SplitMix64& rng)
{
    require(m >= 1, "sample_ris_gt_channel: M must be >= 1");
    require(gt_index == 0 || gt_index == 1, "gt_index must be 0 or 1");
    const double scale =
        std::pow(cfg.ris_gt_distance_m[gt_index], -0.5 * cfg.pathloss_exponent);
    Eigen::VectorXcd f(m);
    for (Eigen::Index k = 0; k < m; ++k)
        f[k] = scale * rng.cgauss();
    return f;
}

/// Thermal noise power: -174 dBm/Hz + 10 log10(B) + noise figure.
inline double thermal_noise_watts(double bandwidth_hz, double noise_figure_db)
{
    require(bandwidth_hz > 0, "thermal_noise_watts: bandwidth must be > 0");
    return dbm_to_watts(-174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
}

/// Draw a full realization. The draw order (h_i, h_j, g, f_i, f_j) is fixed
/// so a given rng state always yields byte-identical channels.
inline ChannelRealization make_channel_realization(const GeometryConfig& cfg, Eigen::Index m,
                                                   double noise_power_w, SplitMix64& rng)
{
    cfg.validate();
    ChannelRealization ch;
    ch.h_direct[0] = sample_direct_channel(cfg, 0, rng, &ch.doppler_phase[0]);
    ch.h_direct[1] = sample_direct_channel(cfg, 1, rng, &ch.doppler_phase[1]);
    if (m > 0) {
        ch.g_sat_ris = sample_sat_ris_channel(cfg, m, rng);
        ch.f_ris_gt[0] = sample_ris_gt_channel(cfg, 0, m, rng);
        ch.f_ris_gt[1] = sample_ris_gt_channel(cfg, 1, m, rng);
    } else {
        ch.g_sat_ris.resize(0);
        ch.f_ris_gt[0].resize(0);
        ch.f_ris_gt[1].resize(0);
    }
    ch.noise_power_w = noise_power_w;
    return ch;
}

/// Unit-modulus reflection coefficients alpha_m (the diagonal of Theta).
struct PhaseShiftVector {
    Eigen::VectorXcd alphas;

    static PhaseShiftVector ones(Eigen::Index m)
    {
        PhaseShiftVector p;
        p.alphas = Eigen::VectorXcd::Ones(m);
        return p;
    }

    static PhaseShiftVector random(Eigen::Index m, SplitMix64& rng)
    {
        PhaseShiftVector p;
        p.alphas.resize(m);
        for (Eigen::Index k = 0; k < m; ++k)
            p.alphas[k] = std::polar(1.0, rng.uniform(0.0, 2.0 * pi));
        return p;
    }

    bool unit_modulus(double tol = 1e-9) const
    {
        for (Eigen::Index k = 0; k < alphas.size(); ++k)
            if (std::abs(std::abs(alphas[k]) - 1.0) > tol) return false;
        return true;
    }
};

/// Composite gain h + sum_m g_m alpha_m f_m. With h = 0 this is the
/// RIS-only path used by the beamforming step.
inline std::complex<double> effective_gain(std::complex<double> h, const Eigen::VectorXcd& g,
                                           const PhaseShiftVector& phases,
                                           const Eigen::VectorXcd& f)
{
    require(g.size() == f.size() && g.size() == phases.alphas.size(),
            "effective_gain: g, phases and f must have equal length");
    std::complex<double> acc = h;
    for (Eigen::Index k = 0; k < g.size(); ++k)
        acc += g[k] * phases.alphas[k] * f[k];
    return acc;
}

/// Elementwise (Hadamard) product of the two hop vectors; with xi_m the
/// conjugate reflection coefficients, |xi^H (g o f)|^2 = |g Theta f|^2.
inline Eigen::VectorXcd cascade_vector(const Eigen::VectorXcd& g, const Eigen::VectorXcd& f)
{
    require(g.size() == f.size(), "cascade_vector: length mismatch");
    return g.cwiseProduct(f);
}

} // namespace risnoma
