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

// Built-in code registry.  The named codes are the verbatim data files under
// data/codes, embedded at configure time; repetition codes of any length are
// generated on demand.

#ifndef QCOSET_REGISTRY_HPP_
#define QCOSET_REGISTRY_HPP_

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcoset/codes.hpp"
#include "qcoset/registry_data.hpp"

namespace qcoset {

inline std::vector<std::string> registry_names() {
  std::vector<std::string> names;
  for (const auto& file : generated::kCodeFiles) {
    names.emplace_back(file.name);
  }
  return names;
}

namespace detail {

inline std::optional<std::size_t> parse_count(std::string_view digits) {
  if (digits.empty() || digits.size() > 6) return std::nullopt;
  std::size_t value = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    value = value * 10 + static_cast<std::size_t>(c - '0');
  }
  if (value == 0) return std::nullopt;
  return value;
}

// Recognizes "repZ(5)", "repX(3)", "5repZ", "7repX" and the unlabeled "5rep"
// (Z-type stabilizers, matching how unlabeled table rows are read).
inline std::optional<StabilizerCode> generated_repetition(
    std::string_view name) {
  if (name.size() > 5 && name.substr(0, 3) == "rep" && name[4] == '(' &&
      name.back() == ')') {
    const char t = name[3];
    if (t != 'X' && t != 'Z') return std::nullopt;
    const auto n = parse_count(name.substr(5, name.size() - 6));
    if (!n) return std::nullopt;
    return repetition_code(*n, pauli_from_char(t));
  }
  const auto pos = name.find("rep");
  if (pos == std::string_view::npos || pos == 0) return std::nullopt;
  const auto n = parse_count(name.substr(0, pos));
  if (!n) return std::nullopt;
  const std::string_view suffix = name.substr(pos + 3);
  if (suffix.empty() || suffix == "Z") {
    return repetition_code(*n, Pauli::Z);
  }
  if (suffix == "X") return repetition_code(*n, Pauli::X);
  return std::nullopt;
}

}  // namespace detail

// Looks up a registry code.  Registry data files take precedence over the
// generated repetition family, so "3repX" is the published transcription
// while "repX(3)" is generated (and flagged permutation symmetric).
inline StabilizerCode registry_get(std::string_view name) {
  std::string_view canonical = name;
  if (name == "7qubit") canonical = "steane";
  for (const auto& file : generated::kCodeFiles) {
    if (file.name == canonical) return parse_code(file.text);
  }
  if (auto rep = detail::generated_repetition(name)) return *rep;
  throw std::invalid_argument("unknown code '" + std::string(name) +
                              "'; run `qcoset codes list` for the registry");
}

inline std::string_view registry_source(std::string_view name) {
  for (const auto& file : generated::kCodeFiles) {
    if (file.name == name) return file.text;
  }
  throw std::invalid_argument("no registry data file for '" +
                              std::string(name) + "'");
}

// Resolves either a registry name or a path to a code file.
inline StabilizerCode load_code(const std::string& spec) {
  const bool looks_like_path =
      spec.find('/') != std::string::npos ||
      (spec.size() > 5 && spec.substr(spec.size() - 5) == ".code");
  if (looks_like_path) {
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("cannot open code file " + spec);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_code(buffer.str());
  }
  return registry_get(spec);
}

inline std::string trim(std::string_view s) {
  const auto is_space = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

// Splits a stack specifier "A x B x C" (inner layer first) into layer names.
// The empty string is the empty stack.
inline std::vector<std::string> split_stack_spec(std::string_view spec) {
  std::vector<std::string> names;
  const std::string whole = trim(spec);
  if (whole.empty()) return names;
  std::string_view rest = whole;
  while (true) {
    const auto sep = rest.find(" x ");
    const std::string layer = trim(rest.substr(0, sep));
    if (layer.empty()) {
      throw std::invalid_argument("empty layer in stack specifier '" +
                                  std::string(spec) + "'");
    }
    names.push_back(layer);
    if (sep == std::string_view::npos) break;
    rest = rest.substr(sep + 3);
  }
  return names;
}

}  // namespace qcoset

#endif  // QCOSET_REGISTRY_HPP_
