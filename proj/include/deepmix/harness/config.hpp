// Copyright 2026 The deepmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "deepmix/kim.hpp"

namespace deepmix::harness {

inline constexpr std::string_view kExperiments[] = {"fig1b",         "dynamics",    "selfdual",          "scrooge_check",
                                                    "ghse_check",    "mc_ref_check", "concentration_scan"};

struct Fig1bParams {
    int a_size = 0;
    int b_size = 0;
    std::vector<int> k_list;
    std::vector<double> epsilon_grid;
};

struct DynamicsParams {
    double J = 0.0;
    double g = 0.0;
    double h = 0.0;
    int s_size = 0;
    int a_size = 0;
    std::vector<int> b_sizes;
    int t_max = 0;
    std::vector<int> k_list;
    int n_realizations = 1;
    RhoSpec rho_s = GinibreRho{};
    EStateSpec e_states = RandomStates{};
};

struct SelfDualParams {
    double g = 0.0;
    int s_size = 0;
    int a_size = 0;
    std::vector<int> b_sizes;
    int t_max = 0;
    std::vector<int> k_list;
    RhoSpec rho_s = GinibreRho{};
};

struct ScroogeParams {
    int s_size = 0;
    int a_size = 0;
    std::vector<int> k_list;
    std::size_t n_samples = 0;
    RhoSpec rho0 = GinibreRho{};
};

struct GhseParams {
    std::size_t rank_dim = 0;
    int a_size = 0;
    std::vector<int> k_list;
    std::size_t n_samples = 0;
};

struct McRefParams {
    int a_size = 0;
    int b_size = 0;
    std::vector<int> k_list;
    std::size_t n_unitaries = 0;
    std::vector<double> eigenvalues;
};

struct ConcentrationParams {
    std::vector<std::uint64_t> dims;
    std::size_t n_samples = 0;
    int a_size = 1;
    int k = 2;
};

using ExperimentParams = std::variant<Fig1bParams, DynamicsParams, SelfDualParams, ScroogeParams, GhseParams,
                                      McRefParams, ConcentrationParams>;

struct ExperimentConfig {
    std::string experiment;
    std::uint64_t master_seed = 0;
    int threads = 1;
    std::filesystem::path output_dir = ".";
    ExperimentParams params;
    /// The parsed document, echoed into every sidecar.
    nlohmann::json source;
};

/// Validates a config document. `experiment` (from the CLI) must agree with the
/// document's "experiment" key when both are given. Throws ConfigError naming
/// the offending key.
ExperimentConfig parse_config(const nlohmann::json& doc, std::string_view experiment = {});

ExperimentConfig load_config(const std::filesystem::path& path, std::string_view experiment = {});

/// Angle values are numbers or strings of the form "pi/4", "3*pi/8", "-pi".
double parse_angle(const nlohmann::json& value, const std::string& key);

}  // namespace deepmix::harness
