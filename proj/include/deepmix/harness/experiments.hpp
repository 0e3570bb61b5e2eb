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

#include <string>
#include <vector>

#include "deepmix/errors.hpp"
#include "deepmix/harness/config.hpp"
#include "deepmix/harness/result_table.hpp"

namespace deepmix::harness {

/// Library version plus the source revision the build came from.
std::string version_string();

/// Budget checks for a validated config; throws BudgetError stating the cap.
void check_budget(const ExperimentConfig& config, const Limits& limits = {});

/// Runs one experiment. Deterministic in (config, master_seed) for any thread count.
/// Dynamics returns the per-realization table followed by the aggregate table.
std::vector<ResultTable> run_experiment(const ExperimentConfig& config, const Limits& limits = {});

}  // namespace deepmix::harness
