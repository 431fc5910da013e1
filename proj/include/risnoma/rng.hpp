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
#include <complex>
#include <cstdint>

#include "risnoma/common.hpp"

namespace risnoma {

/// Splittable 64-bit generator (SplitMix64). One instance per trial stream;
/// deterministic for a fixed seed, cheap to fork into independent substreams.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe as a log() argument.
    double uniform_open() { return double((next() >> 11) + 1) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard real Gaussian via Box-Muller.
    double gauss()
    {
        double u1 = uniform_open();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    }

    /// Circularly-symmetric complex Gaussian CN(0, 1): E[|z|^2] = 1.
    std::complex<double> cgauss()
    {
        double u1 = uniform_open();
        double u2 = uniform();
        double r = std::sqrt(-std::log(u1));
        return {r * std::cos(2.0 * pi * u2), r * std::sin(2.0 * pi * u2)};
    }

    /// Fork an independent substream tagged by purpose (channel draw,
    /// benchmark phases, randomization, ...). Mixing the tag through the
    /// output function decorrelates the streams.
    SplitMix64 fork(std::uint64_t tag) const
    {
        SplitMix64 h(state_ ^ (0x632be59bd9b4e019ULL * (tag + 1)));
        return SplitMix64(h.next());
    }

  private:
    std::uint64_t state_;
};

/// Per-trial seed rule: master_seed XOR trial_index.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index)
{
    return master_seed ^ trial_index;
}

} // namespace risnoma
