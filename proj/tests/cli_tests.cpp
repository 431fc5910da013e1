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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr interleaved
};

RunResult run_cli(const std::string& args)
{
    const std::string cmd = std::string(RISNOMA_CLI_PATH) + " " + args + " 2>&1";
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.output.append(buf.data(), n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_dir(const std::string& tag)
{
    const auto dir = std::filesystem::temp_directory_path() / ("risnoma_cli_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

const char* kQuickConfig = R"({
    "ris_elements": 4,
    "trials": 6,
    "jobs": 2,
    "master_seed": 99,
    "power_grid_dbm": [46, 48, 50],
    "qos_grid_mbps": [4, 10],
    "convergence_m": [2, 4],
    "solver": {"randomization_samples": 30}
})";

} // namespace

TEST_CASE("--help matches the golden file byte for byte")
{
    const auto res = run_cli("--help");
    CHECK(res.exit_code == 0);
    const std::string golden = read_file(std::string(RISNOMA_TEST_DATA_DIR) + "/cli_help.txt");
    CHECK(res.output == golden);
}

TEST_CASE("bad invocations exit nonzero with a diagnostic")
{
    const auto none = run_cli("");
    CHECK(none.exit_code != 0);
    CHECK(none.output.find("subcommand") != std::string::npos);

    const auto unknown = run_cli("frobnicate");
    CHECK(unknown.exit_code != 0);

    const auto badcfg = run_cli("single-trial --config /does/not/exist.json");
    CHECK(badcfg.exit_code != 0);
    CHECK(badcfg.output.find("/does/not/exist.json") != std::string::npos);

    const auto badfw = run_cli("single-trial --framework warp_drive");
    CHECK(badfw.exit_code != 0);
    CHECK(badfw.output.find("warp_drive") != std::string::npos);
}

TEST_CASE("single-trial writes a trace and reports machine-readable output")
{
    const auto dir = temp_dir("single");
    const auto cfgpath = dir + "/cfg.json";
    std::ofstream(cfgpath) << kQuickConfig;
    const auto res = run_cli("--config " + cfgpath + " --out-dir " + dir + " single-trial");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("seed,framework,ee,rate_i,rate_j,iterations,feasible") !=
          std::string::npos);
    CHECK(std::filesystem::exists(dir + "/single_trial.csv"));
    const auto trace = read_file(dir + "/single_trial.csv");
    CHECK(trace.rfind("iteration,ee,phi,eta,rho_i,rho_j,rate_i,rate_j,feasible\n", 0) == 0);
    CHECK(trace.size() > trace.find('\n') + 1); // at least one data row
}

TEST_CASE("sweeps are byte-stable across runs and honor --emit-plots")
{
    const auto dir1 = temp_dir("sweep1");
    const auto dir2 = temp_dir("sweep2");
    const auto cfgpath = dir1 + "/cfg.json";
    std::ofstream(cfgpath) << kQuickConfig;

    const auto r1 =
        run_cli("--config " + cfgpath + " --out-dir " + dir1 + " --emit-plots sweep-qos");
    const auto r2 =
        run_cli("--config " + cfgpath + " --out-dir " + dir2 + " --emit-plots sweep-qos");
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    const auto csv1 = read_file(dir1 + "/sweep_qos.csv");
    const auto csv2 = read_file(dir2 + "/sweep_qos.csv");
    CHECK(csv1 == csv2);
    CHECK(csv1.rfind("param_value,framework,mean_ee,ci95,infeasible_frac,trials\n", 0) == 0);
    CHECK(std::filesystem::exists(dir1 + "/sweep_qos.svg"));
    const auto svg = read_file(dir1 + "/sweep_qos.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("proposed") != std::string::npos);
}

TEST_CASE("convergence command emits the documented schema")
{
    const auto dir = temp_dir("conv");
    const auto cfgpath = dir + "/cfg.json";
    std::ofstream(cfgpath) << kQuickConfig;
    const auto res =
        run_cli("--config " + cfgpath + " --out-dir " + dir + " --trials 4 convergence");
    CHECK(res.exit_code == 0);
    const auto csv = read_file(dir + "/convergence.csv");
    CHECK(csv.rfind("M,iteration,mean_ee,ci95\n", 0) == 0);
    CHECK(csv.find("\n2,1,") != std::string::npos);
    CHECK(csv.find("\n4,1,") != std::string::npos);
}
