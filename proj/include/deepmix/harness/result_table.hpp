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
#include <variant>
#include <vector>

#include "json.hpp"

namespace deepmix::harness {

using Cell = std::variant<std::int64_t, double, std::string>;

struct ResultTable {
    /// File stem: <name>.csv and <name>.json.
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json metadata = nlohmann::json::object();

    /// Throws std::invalid_argument on a width mismatch or a non-finite value.
    void add_row(std::vector<Cell> row);
};

/// Doubles use 17 significant digits, which round-trips exactly.
std::string format_cell(const Cell& cell);

std::string to_csv(const ResultTable& table);

/// Writes <dir>/<name>.csv and the <dir>/<name>.json sidecar. Returns the CSV path.
std::filesystem::path write_csv(const ResultTable& table, const std::filesystem::path& dir);

/// RFC-4180 reader for the files written above (used by tests and tooling).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace deepmix::harness
