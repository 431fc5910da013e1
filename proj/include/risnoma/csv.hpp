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

#include <cstdio>
#include <fstream>
#include <string>

#include "risnoma/altopt.hpp"
#include "risnoma/experiments.hpp"

namespace risnoma {

/// 12 significant digits, locale-independent; identical inputs give
/// byte-identical text.
inline std::string csv_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string to_csv(const SweepResult& sweep)
{
    std::string out = "param_value,framework,mean_ee,ci95,infeasible_frac,trials\n";
    for (const auto& p : sweep.points) {
        out += csv_number(p.param_value);
        out += ',';
        out += framework_name(p.framework);
        out += ',';
        out += csv_number(p.mean_ee);
        out += ',';
        out += csv_number(p.ci95);
        out += ',';
        out += csv_number(p.infeasible_frac);
        out += ',';
        out += std::to_string(p.trials);
        out += '\n';
    }
    return out;
}

inline std::string to_csv(const ConvergenceTable& table)
{
    std::string out = "M,iteration,mean_ee,ci95\n";
    for (const auto& r : table.rows) {
        out += std::to_string(r.m);
        out += ',';
        out += std::to_string(r.iteration);
        out += ',';
        out += csv_number(r.mean_ee);
        out += ',';
        out += csv_number(r.ci95);
        out += '\n';
    }
    return out;
}

inline std::string to_csv(const EETrace& trace)
{
    std::string out = "iteration,ee,phi,eta,rho_i,rho_j,rate_i,rate_j,feasible\n";
    for (const auto& e : trace.entries) {
        out += std::to_string(e.iteration);
        out += ',';
        out += csv_number(e.ee);
        out += ',';
        out += csv_number(e.phi);
        out += ',';
        out += csv_number(e.eta);
        out += ',';
        out += csv_number(e.rho_i);
        out += ',';
        out += csv_number(e.rho_j);
        out += ',';
        out += csv_number(e.rate_i);
        out += ',';
        out += csv_number(e.rate_j);
        out += ',';
        out += e.feasible ? '1' : '0';
        out += '\n';
    }
    return out;
}

inline void write_file(const std::string& text, const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

template <typename T>
void emit_csv(const T& value, const std::string& path)
{
    write_file(to_csv(value), path);
}

} // namespace risnoma
