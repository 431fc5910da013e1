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
#include <stdexcept>
#include <string>

namespace risnoma {

inline constexpr double speed_of_light_mps = 299792458.0;
inline constexpr double pi = 3.14159265358979323846;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

[[noreturn]] inline void fail_invalid(const std::string& what) {
    throw std::invalid_argument(what);
}

inline void require(bool cond, const std::string& what) {
    if (!cond) fail_invalid(what);
}

} // namespace risnoma
