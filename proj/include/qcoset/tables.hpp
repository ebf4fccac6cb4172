// Copyright 2026 The qcoset Authors
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

// Bundled regression manifests: published thresholds and optimized
// channels, shipped as CSV files (each names its source table in a comment
// header) and embedded at build time.

#ifndef QCOSET_TABLES_HPP_
#define QCOSET_TABLES_HPP_

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcoset/registry_data.hpp"

namespace qcoset {

struct ThresholdRow {
  std::string label;
  std::string stack;
  std::string channel;
  double expected = 0.0;
  double tol = 0.0;
  std::string method;
};

struct OptimizedRow {
  std::string label;
  std::string stack;
  double cx = 0.0, cy = 0.0, cz = 0.0;
  double q = 0.0;
  double p_hash = 0.0;
  double tol = 0.0;
};

inline std::vector<std::string> table_names() {
  std::vector<std::string> names;
  for (const auto& f : generated::kTableFiles) names.emplace_back(f.name);
  return names;
}

inline std::string_view table_source(std::string_view name) {
  for (const auto& f : generated::kTableFiles) {
    if (f.name == name) return f.text;
  }
  throw std::invalid_argument("unknown table '" + std::string(name) + "'");
}

namespace detail {

// Splits one CSV record; fields may be double-quoted to contain commas.
inline std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quote in CSV record");
  return fields;
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad number '" + s + "' in table");
  }
  return v;
}

// Data records of a manifest, with the header checked against `columns`.
inline std::vector<std::vector<std::string>> csv_records(
    std::string_view text, const std::vector<std::string>& columns) {
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  std::vector<std::vector<std::string>> records;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv(line);
    if (!header) {
      if (fields != columns) {
        throw std::invalid_argument("unexpected table header: " + line);
      }
      header = true;
      continue;
    }
    if (fields.size() != columns.size()) {
      throw std::invalid_argument("wrong field count in table record: " + line);
    }
    records.push_back(std::move(fields));
  }
  return records;
}

}  // namespace detail

inline bool is_threshold_table(std::string_view text) {
  return text.find("\nlabel,stack,channel,") != std::string_view::npos ||
         text.substr(0, 20) == "label,stack,channel,";
}

inline std::vector<ThresholdRow> parse_threshold_table(std::string_view text) {
  std::vector<ThresholdRow> rows;
  for (auto& f : detail::csv_records(
           text, {"label", "stack", "channel", "expected", "tol", "method"})) {
    rows.push_back({f[0], f[1], f[2], detail::parse_double(f[3]),
                    detail::parse_double(f[4]), f[5]});
  }
  return rows;
}

inline std::vector<OptimizedRow> parse_optimized_table(std::string_view text) {
  std::vector<OptimizedRow> rows;
  for (auto& f : detail::csv_records(
           text, {"label", "stack", "cx", "cy", "cz", "q", "p_hash", "tol"})) {
    rows.push_back({f[0], f[1], detail::parse_double(f[2]),
                    detail::parse_double(f[3]), detail::parse_double(f[4]),
                    detail::parse_double(f[5]), detail::parse_double(f[6]),
                    detail::parse_double(f[7])});
  }
  return rows;
}

}  // namespace qcoset

#endif  // QCOSET_TABLES_HPP_
