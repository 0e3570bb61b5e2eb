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

#include "deepmix/harness/result_table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace deepmix::harness {

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::invalid_argument("table " + name + ": row has " + std::to_string(row.size()) + " cells for " +
                                    std::to_string(columns.size()) + " columns");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
        if (const double* d = std::get_if<double>(&row[c]); d && !std::isfinite(*d)) {
            throw std::invalid_argument("table " + name + ": non-finite value in column " + columns[c]);
        }
    }
    rows.push_back(std::move(row));
}

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string format_cell(const Cell& cell) {
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    if (const auto* s = std::get_if<std::string>(&cell)) return quote(*s);
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, std::get<double>(cell), std::chars_format::general, 17);
    return {buf, res.ptr};
}

std::string to_csv(const ResultTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += quote(table.columns[c]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_cell(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::filesystem::path write_csv(const ResultTable& table, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    const std::filesystem::path csv = dir / (table.name + ".csv");
    const std::filesystem::path meta = dir / (table.name + ".json");
    {
        std::ofstream out(csv, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + csv.string() + " for writing");
        out << to_csv(table);
        if (!out) throw std::runtime_error("write failed for " + csv.string());
    }
    {
        std::ofstream out(meta, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + meta.string() + " for writing");
        out << table.metadata.dump(2) << '\n';
        if (!out) throw std::runtime_error("write failed for " + meta.string());
    }
    return csv;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw std::invalid_argument("parse_csv: unterminated quoted field");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace deepmix::harness
