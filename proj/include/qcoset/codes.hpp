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

// Stabilizer codes: representation, the text file format, validation, and
// error classification into stabilizer cosets.

#ifndef QCOSET_CODES_HPP_
#define QCOSET_CODES_HPP_

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcoset/pauli.hpp"

namespace qcoset {

struct StabilizerCode {
  std::string name;
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<PauliString> generators;
  std::vector<PauliString> logical_x;
  std::vector<PauliString> logical_z;
  // True when S_RB is invariant under permuting the per-qubit channels, so
  // concatenation may group assignments into multisets.
  bool permutation_symmetric = false;
};

namespace detail {

// Rank over GF(2) of the symplectic vectors (x|z) of `ops`.
inline std::size_t symplectic_rank(const std::vector<PauliString>& ops) {
  if (ops.empty()) return 0;
  const std::size_t words = ops[0].x_words().size();
  std::vector<std::vector<std::uint64_t>> rows;
  rows.reserve(ops.size());
  for (const auto& op : ops) {
    std::vector<std::uint64_t> row(op.x_words().begin(), op.x_words().end());
    row.insert(row.end(), op.z_words().begin(), op.z_words().end());
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t bit = 0; bit < 2 * words * 64 && rank < rows.size();
       ++bit) {
    const std::size_t w = bit / 64;
    const std::uint64_t mask = std::uint64_t{1} << (bit % 64);
    std::size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot][w] & mask)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && (rows[r][w] & mask)) {
        for (std::size_t j = 0; j < rows[r].size(); ++j) {
          rows[r][j] ^= rows[rank][j];
        }
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

// Throws std::invalid_argument naming the first violated invariant.
inline void validate(const StabilizerCode& code) {
  const auto fail = [&](const std::string& what) {
    throw std::invalid_argument("code '" + code.name + "': " + what);
  };
  if (code.k > code.n) fail("k exceeds n");
  if (code.generators.size() != code.n - code.k) {
    fail("expected " + std::to_string(code.n - code.k) + " generators, got " +
         std::to_string(code.generators.size()));
  }
  if (code.logical_x.size() != code.k || code.logical_z.size() != code.k) {
    fail("expected " + std::to_string(code.k) +
         " logical X and Z representatives");
  }
  const auto check_len = [&](const std::vector<PauliString>& ops,
                             const char* what) {
    for (const auto& op : ops) {
      if (op.size() != code.n) {
        fail(std::string(what) + " " + op.str() + " has length " +
             std::to_string(op.size()) + ", expected " +
             std::to_string(code.n));
      }
    }
  };
  check_len(code.generators, "generator");
  check_len(code.logical_x, "logical X");
  check_len(code.logical_z, "logical Z");

  for (std::size_t i = 0; i < code.generators.size(); ++i) {
    for (std::size_t j = i + 1; j < code.generators.size(); ++j) {
      if (!commutes(code.generators[i], code.generators[j])) {
        fail("generators " + code.generators[i].str() + " and " +
             code.generators[j].str() + " anticommute");
      }
    }
  }
  if (detail::symplectic_rank(code.generators) != code.generators.size()) {
    fail("generators are not independent");
  }
  for (const auto* group : {&code.logical_x, &code.logical_z}) {
    for (const auto& l : *group) {
      for (const auto& g : code.generators) {
        if (!commutes(l, g)) {
          fail("logical " + l.str() + " anticommutes with generator " +
               g.str());
        }
      }
    }
  }
  for (std::size_t i = 0; i < code.k; ++i) {
    for (std::size_t j = 0; j < code.k; ++j) {
      const bool anti = !commutes(code.logical_x[i], code.logical_z[j]);
      if (anti != (i == j)) {
        fail("logical X" + std::to_string(i) + " and Z" + std::to_string(j) +
             (anti ? " anticommute" : " commute"));
      }
      if (i < j && (!commutes(code.logical_x[i], code.logical_x[j]) ||
                    !commutes(code.logical_z[i], code.logical_z[j]))) {
        fail("logicals of different qubits anticommute");
      }
    }
  }
  std::vector<PauliString> all = code.generators;
  all.insert(all.end(), code.logical_x.begin(), code.logical_x.end());
  all.insert(all.end(), code.logical_z.begin(), code.logical_z.end());
  if (detail::symplectic_rank(all) != code.n + code.k) {
    fail("logical operators are not independent of the stabilizer");
  }
}

// Parses the code-file format:
//
//   name <id>
//   nk <n> <k>
//   G <pauli>      (one per generator)
//   LX <pauli>     (one per logical qubit, in pairing order)
//   LZ <pauli>
//
// Blank lines and lines starting with '#' are ignored.  A generator list
// with redundant (dependent) entries is accepted and reduced to its first
// n - k independent members; anything else inconsistent is rejected.
inline StabilizerCode parse_code(std::string_view text) {
  StabilizerCode code;
  bool have_nk = false;
  std::vector<PauliString> listed;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key) || key[0] == '#') continue;
    const auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
    if (key == "name") {
      if (!(fields >> code.name)) {
        throw std::invalid_argument(where() + "missing code name");
      }
    } else if (key == "nk") {
      if (!(fields >> code.n >> code.k)) {
        throw std::invalid_argument(where() + "expected 'nk <n> <k>'");
      }
      have_nk = true;
    } else if (key == "G" || key == "LX" || key == "LZ") {
      std::string word;
      if (!(fields >> word)) {
        throw std::invalid_argument(where() + "missing Pauli string");
      }
      PauliString op;
      try {
        op = PauliString::parse(word);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(where() + e.what());
      }
      if (key == "G") {
        listed.push_back(std::move(op));
      } else if (key == "LX") {
        code.logical_x.push_back(std::move(op));
      } else {
        code.logical_z.push_back(std::move(op));
      }
    } else {
      throw std::invalid_argument(where() + "unknown record '" + key + "'");
    }
  }
  if (!have_nk) throw std::invalid_argument("code file lacks an 'nk' line");
  if (code.name.empty()) code.name = "unnamed";
  if (listed.size() > code.n - code.k) {
    std::vector<PauliString> kept;
    for (auto& g : listed) {
      kept.push_back(g);
      if (detail::symplectic_rank(kept) != kept.size()) kept.pop_back();
    }
    listed = std::move(kept);
  }
  code.generators = std::move(listed);
  validate(code);
  return code;
}

inline std::string serialize_code(const StabilizerCode& code) {
  std::string out = "name " + code.name + "\n";
  out += "nk " + std::to_string(code.n) + " " + std::to_string(code.k) + "\n";
  for (const auto& g : code.generators) out += "G " + g.str() + "\n";
  for (const auto& l : code.logical_x) out += "LX " + l.str() + "\n";
  for (const auto& l : code.logical_z) out += "LZ " + l.str() + "\n";
  return out;
}

// Repetition code with stabilizer generators of the given letter (Z or X)
// on qubit pairs (0, j).
inline StabilizerCode repetition_code(std::size_t n, Pauli type) {
  if (n == 0) throw std::invalid_argument("repetition code needs n >= 1");
  if (type != Pauli::X && type != Pauli::Z) {
    throw std::invalid_argument("repetition code type must be X or Z");
  }
  const Pauli other = type == Pauli::Z ? Pauli::X : Pauli::Z;
  StabilizerCode code;
  code.name = std::string("rep") + to_char(type) + "(" + std::to_string(n) +
              ")";
  code.n = n;
  code.k = 1;
  code.permutation_symmetric = true;
  for (std::size_t j = 1; j < n; ++j) {
    PauliString g(n);
    g.set(0, type);
    g.set(j, type);
    code.generators.push_back(std::move(g));
  }
  // The logical that is a product over all qubits uses the other letter;
  // the single-qubit representative uses the generator letter.
  PauliString global(n), local(n);
  for (std::size_t i = 0; i < n; ++i) global.set(i, other);
  local.set(0, type);
  if (type == Pauli::Z) {
    code.logical_x = {global};
    code.logical_z = {local};
  } else {
    code.logical_x = {local};
    code.logical_z = {global};
  }
  return code;
}

// Coset address of an error: the syndrome against each generator and, per
// logical qubit j, the pair (commutes with LX_j, commutes with LZ_j).
struct ErrorClass {
  std::vector<std::uint8_t> syndrome;
  std::vector<std::uint8_t> logical;  // 2k entries: LX_0, LZ_0, LX_1, ...
};

inline ErrorClass classify(const StabilizerCode& code, const PauliString& e) {
  if (e.size() != code.n) {
    throw std::invalid_argument("error length " + std::to_string(e.size()) +
                                " does not match code length " +
                                std::to_string(code.n));
  }
  ErrorClass out;
  out.syndrome.reserve(code.generators.size());
  for (const auto& g : code.generators) {
    out.syndrome.push_back(static_cast<std::uint8_t>(symplectic_product(e, g)));
  }
  for (std::size_t j = 0; j < code.k; ++j) {
    out.logical.push_back(
        static_cast<std::uint8_t>(symplectic_product(e, code.logical_x[j])));
    out.logical.push_back(
        static_cast<std::uint8_t>(symplectic_product(e, code.logical_z[j])));
  }
  return out;
}

// Logical class of qubit j as a Pauli letter: anticommuting with LZ_j means
// an X component, anticommuting with LX_j means a Z component.
inline Pauli logical_letter(const ErrorClass& c, std::size_t j) {
  const unsigned x = c.logical[2 * j + 1];
  const unsigned z = c.logical[2 * j];
  return static_cast<Pauli>(x | (z << 1));
}

// Flat cell index used by coset tables: syndrome bits occupy the high part,
// then 2 bits per logical qubit in symplectic letter order (bit 2j = X
// component, bit 2j+1 = Z component).
inline std::uint64_t cell_index(const StabilizerCode& code,
                                const ErrorClass& c) {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < c.syndrome.size(); ++i) {
    index |= std::uint64_t{c.syndrome[i]} << (2 * code.k + i);
  }
  for (std::size_t j = 0; j < code.k; ++j) {
    index |= std::uint64_t{static_cast<std::uint8_t>(logical_letter(c, j))}
             << (2 * j);
  }
  return index;
}

// Exchanges X and Z on every operator of the code.
inline StabilizerCode swap_xz(const StabilizerCode& code) {
  const auto swap_op = [](const PauliString& p) {
    PauliString q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Pauli l = p[i];
      q.set(i, l == Pauli::X ? Pauli::Z : l == Pauli::Z ? Pauli::X : l);
    }
    return q;
  };
  StabilizerCode out = code;
  out.name = code.name + "^H";
  for (auto& g : out.generators) g = swap_op(g);
  // Swapping letters turns X-type logicals into Z-type ones.
  out.logical_x.clear();
  out.logical_z.clear();
  for (const auto& l : code.logical_z) out.logical_x.push_back(swap_op(l));
  for (const auto& l : code.logical_x) out.logical_z.push_back(swap_op(l));
  return out;
}

}  // namespace qcoset

#endif  // QCOSET_CODES_HPP_
