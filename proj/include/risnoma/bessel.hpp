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
#include <cstdlib>

#include "risnoma/common.hpp"

namespace risnoma {

namespace detail {

// Ascending power series J_n(x) = sum_k (-1)^k (x/2)^(n+2k) / (k! (k+n)!).
// Accurate to well below 1e-10 absolute for x < 12 (worst-case cancellation
// there loses ~4 digits against ~1e3 peak terms).
inline double bessel_series(int n, double x)
{
    const double half = 0.5 * x;
    double term = 1.0;
    for (int i = 1; i <= n; ++i) term *= half / double(i); // (x/2)^n / n!
    double sum = term;
    const double x2 = half * half;
    for (int k = 1; k <= 80; ++k) {
        term *= -x2 / (double(k) * double(k + n));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-30)) break;
    }
    return sum;
}

// Hankel asymptotic expansion for large argument:
//   J_nu(x) ~ sqrt(2/(pi x)) (P cos(chi) - Q sin(chi)),
//   chi = x - (nu/2 + 1/4) pi,
// with P, Q summed to the smallest term (series is divergent; optimal
// truncation leaves an error far below 1e-10 for x >= 12, nu in {0,1}).
inline double bessel_asymptotic(int nu, double x)
{
    const double mu = 4.0 * double(nu) * double(nu);
    double p = 1.0, q = 0.0;
    double term = 1.0;
    double prev = 1e300;
    for (int j = 1; j <= 40; ++j) {
        const double odd = 2.0 * j - 1.0;
        term *= (mu - odd * odd) / (8.0 * double(j) * x);
        if (std::abs(term) >= prev) break; // divergence onset
        prev = std::abs(term);
        const int sign = ((j / 2) % 2 == 0) ? 1 : -1;
        if (j % 2 == 1)
            q += sign * term;
        else
            p += sign * term;
        if (std::abs(term) < 1e-19) break;
    }
    const double chi = x - (0.5 * nu + 0.25) * pi;
    return std::sqrt(2.0 / (pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

inline double bessel_j_any(int n, double x)
{
    if (x < 12.0) return bessel_series(n, x);
    const double j0 = bessel_asymptotic(0, x);
    const double j1 = bessel_asymptotic(1, x);
    if (n == 0) return j0;
    if (n == 1) return j1;
    // Upward recurrence J_{k+1} = (2k/x) J_k - J_{k-1}; stable for k < x.
    double jkm1 = j0, jk = j1;
    for (int k = 1; k < n; ++k) {
        const double jkp1 = (2.0 * double(k) / x) * jk - jkm1;
        jkm1 = jk;
        jk = jkp1;
    }
    return jk;
}

} // namespace detail

/// First-kind Bessel function, orders 1 and 3 (the two the antenna pattern
/// needs). Absolute accuracy better than 1e-10 on [0, 50].
inline double bessel_j(int order, double x)
{
    if (order != 1 && order != 3) fail_invalid("bessel_j: order must be 1 or 3");
    if (x < 0.0) fail_invalid("bessel_j: x must be >= 0");
    return detail::bessel_j_any(order, x);
}

} // namespace risnoma
