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

// Exact coset probabilities of a stabilizer code under independent
// per-qubit Pauli channels, and the entropy S_RB derived from them.
//
// Every error is addressed by its class vector (syndrome bits plus two
// commutation bits per logical qubit), and a Pauli on qubit i flips a fixed
// set of those bits.  The class-vector distribution is therefore a product
// of per-qubit XOR convolutions, which is accumulated one qubit at a time
// over all 2^(n+k) class vectors.  That is the full sum over 4^n errors in
// O(n 2^(n+k)) work, with only non-negative terms, so no cancellation and
// no need for extended-precision accumulation.

#ifndef QCOSET_EXACT_ENGINE_HPP_
#define QCOSET_EXACT_ENGINE_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcoset/channels.hpp"
#include "qcoset/codes.hpp"

namespace qcoset {

// Probability of every stabilizer coset, grouped by syndrome.  Cell
// (T, L) lives at index (T << 2k) | L where L is the logical class in
// symplectic letter order (see cell_index).
struct CosetTable {
  std::string code_name;
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<double> cells;

  std::size_t classes() const { return std::size_t{1} << (2 * k); }
  std::size_t syndromes() const { return std::size_t{1} << (n - k); }

  std::span<const double> row(std::size_t syndrome) const {
    return {cells.data() + syndrome * classes(), classes()};
  }

  double normalizer(std::size_t syndrome) const {
    double total = 0.0;
    for (double v : row(syndrome)) total += v;
    return total;
  }
};

struct EngineOptions {
  // Largest n + k accepted; the table has 2^(n+k) cells.
  std::size_t max_class_bits = 24;
};

// Per-qubit class-vector toggles of a code, and the single-qubit update.
class CosetDp {
 public:
  explicit CosetDp(const StabilizerCode& code, const EngineOptions& opts = {})
      : n_(code.n), k_(code.k) {
    if (code.n + code.k > opts.max_class_bits) {
      throw std::invalid_argument(
          "code '" + code.name + "' needs 2^" +
          std::to_string(code.n + code.k) +
          " coset cells, above the configured exhaustive limit of 2^" +
          std::to_string(opts.max_class_bits));
    }
    toggle_x_.assign(n_, 0);
    toggle_z_.assign(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      std::uint64_t tx = 0, tz = 0;
      for (std::size_t g = 0; g < code.generators.size(); ++g) {
        const std::uint64_t bit = std::uint64_t{1} << (2 * k_ + g);
        if (code.generators[g].z(i)) tx |= bit;
        if (code.generators[g].x(i)) tz |= bit;
      }
      for (std::size_t j = 0; j < k_; ++j) {
        // X component of logical j <=> anticommutes with LZ_j.
        const std::uint64_t xbit = std::uint64_t{1} << (2 * j);
        const std::uint64_t zbit = std::uint64_t{1} << (2 * j + 1);
        if (code.logical_z[j].z(i)) tx |= xbit;
        if (code.logical_z[j].x(i)) tz |= xbit;
        if (code.logical_x[j].z(i)) tx |= zbit;
        if (code.logical_x[j].x(i)) tz |= zbit;
      }
      toggle_x_[i] = tx;
      toggle_z_[i] = tz;
    }
  }

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t cells() const { return std::size_t{1} << (n_ + k_); }

  void init(std::vector<double>& state) const {
    state.assign(cells(), 0.0);
    state[0] = 1.0;
  }

  // out = in convolved with the channel on qubit `site`.
  void apply(std::size_t site, const PauliChannel& ch,
             const std::vector<double>& in, std::vector<double>& out) const {
    const std::size_t size = cells();
    out.resize(size);
    const std::uint64_t tx = toggle_x_[site], tz = toggle_z_[site];
    const std::uint64_t ty = tx ^ tz;
    const double pi = ch.pi, px = ch.px, py = ch.py, pz = ch.pz;
    for (std::size_t c = 0; c < size; ++c) {
      out[c] = pi * in[c] + px * in[c ^ tx] + pz * in[c ^ tz] +
               py * in[c ^ ty];
    }
  }

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<std::uint64_t> toggle_x_;
  std::vector<std::uint64_t> toggle_z_;
};

inline CosetTable coset_distribution(const StabilizerCode& code,
                                     std::span<const PauliChannel> site_channels,
                                     const EngineOptions& opts = {}) {
  if (site_channels.size() != code.n) {
    throw std::invalid_argument("need " + std::to_string(code.n) +
                                " site channels, got " +
                                std::to_string(site_channels.size()));
  }
  const CosetDp dp(code, opts);
  std::vector<double> a, b;
  dp.init(a);
  for (std::size_t i = 0; i < code.n; ++i) {
    dp.apply(i, site_channels[i], a, b);
    a.swap(b);
  }
  return {code.name, code.n, code.k, std::move(a)};
}

inline CosetTable coset_distribution(const StabilizerCode& code,
                                     const PauliChannel& ch,
                                     const EngineOptions& opts = {}) {
  const std::vector<PauliChannel> sites(code.n, ch);
  return coset_distribution(code, sites, opts);
}

namespace detail {

inline double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace detail

// S_RB in bits from raw cells (rows of `classes` entries): the sum over
// syndromes of P_T times the entropy of the conditional logical class.
inline double s_rb_cells(std::span<const double> cells, std::size_t classes) {
  double s = 0.0;
  for (std::size_t base = 0; base < cells.size(); base += classes) {
    double total = 0.0, acc = 0.0;
    for (std::size_t l = 0; l < classes; ++l) {
      const double v = cells[base + l];
      total += v;
      acc += detail::plogp(v);
    }
    if (total > 0.0) s += detail::plogp(total) - acc;
  }
  return s;
}

// Conditional-entropy form: sum_T P_T H(P_{T_L} / P_T).
inline double s_rb_exact(const CosetTable& table) {
  double s = 0.0;
  for (std::size_t t = 0; t < table.syndromes(); ++t) {
    const double total = table.normalizer(t);
    if (total <= 0.0) continue;
    double h = 0.0;
    for (double v : table.row(t)) h -= detail::plogp(v / total);
    s += total * h;
  }
  return s;
}

// Entropy-difference form: H(stabilizer cosets) - H(normalizer cosets).
inline double s_rb_entropy_difference(const CosetTable& table) {
  double h_stab = 0.0, h_norm = 0.0;
  for (std::size_t t = 0; t < table.syndromes(); ++t) {
    for (double v : table.row(t)) h_stab -= detail::plogp(v);
    h_norm -= detail::plogp(table.normalizer(t));
  }
  return h_stab - h_norm;
}

}  // namespace qcoset

#endif  // QCOSET_EXACT_ENGINE_HPP_
