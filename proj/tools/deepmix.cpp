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

// deepmix <experiment> --config <path> [--out <dir>] [--seed <u64>] [--threads <n>]
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration error, 3 budget error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "deepmix/errors.hpp"
#include "deepmix/harness/config.hpp"
#include "deepmix/harness/experiments.hpp"
#include "deepmix/harness/result_table.hpp"

namespace {

int env_threads() {
    const char* v = std::getenv("DEEPMIX_THREADS");
    if (!v || !*v) return 0;
    try {
        std::size_t used = 0;
        const int n = std::stoi(v, &used);
        if (used != std::string(v).size() || n < 1) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw deepmix::ConfigError("DEEPMIX_THREADS must be a positive integer, got '" + std::string(v) + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    namespace h = deepmix::harness;
    CLI::App app{"deepmix: projected ensembles of mixed states"};
    app.set_version_flag("--version", h::version_string());

    std::string experiment;
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::vector<std::string> names(std::begin(h::kExperiments), std::end(h::kExperiments));
    app.add_option("experiment", experiment, "Experiment to run")->required()->check(CLI::IsMember(names));
    app.add_option("--config", config_path, "JSON configuration file")->required();
    app.add_option("--out", out_dir, "Output directory (overrides output_dir)");
    app.add_option("--seed", seed, "Master seed (overrides master_seed)");
    app.add_option("--threads", threads, "Worker threads (overrides threads and DEEPMIX_THREADS)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        h::ExperimentConfig config = h::load_config(config_path, experiment);
        if (!config.source.contains("threads")) {
            if (const int n = env_threads(); n > 0) config.threads = n;
        }
        if (out_dir) config.output_dir = *out_dir;
        if (seed) config.master_seed = *seed;
        if (threads) config.threads = *threads;

        for (const h::ResultTable& table : h::run_experiment(config)) {
            std::cout << h::write_csv(table, config.output_dir).string() << '\n';
        }
        return 0;
    } catch (const deepmix::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const deepmix::BudgetError& e) {
        std::cerr << "budget error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
