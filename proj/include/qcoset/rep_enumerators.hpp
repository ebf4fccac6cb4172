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

// Closed-form coset enumerators of [[n,1]] repetition codes and of n x m
// concatenated bit/phase-flip repetition codes, evaluated at arbitrary
// Pauli channels, plus the exact S_RB of the concatenated family.

#ifndef QCOSET_REP_ENUMERATORS_HPP_
#define QCOSET_REP_ENUMERATORS_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcoset/channels.hpp"
#include "qcoset/pauli.hpp"

namespace qcoset {

enum class Enumerator { f_even, f_odd, g };

// f^e_n = ((x+y)^n + (x-y)^n)/2, f^o_n = ((x+y)^n - (x-y)^n)/2,
// g_{k,n} = (x+y)^(n-k) (2y)^k / 2.
inline double fgh_eval(Enumerator kind, std::size_t n, std::size_t k, double x,
                       double y) {
  const double dn = static_cast<double>(n);
  switch (kind) {
    case Enumerator::f_even:
      return 0.5 * (std::pow(x + y, dn) + std::pow(x - y, dn));
    case Enumerator::f_odd:
      return 0.5 * (std::pow(x + y, dn) - std::pow(x - y, dn));
    case Enumerator::g:
      if (k > n) throw std::invalid_argument("g_{k,n} needs k <= n");
      return 0.5 * std::pow(x + y, dn - static_cast<double>(k)) *
             std::pow(2.0 * y, static_cast<double>(k));
  }
  return 0.0;
}

// Stabilizer-coset masses h^b_{k,n} of one repetition block.  For a Z-type
// block, k counts the qubits whose error has an X component and b is the
// parity of the Z components; each of the C(n,k) placements of the X
// components is a distinct coset of this mass.  X-type blocks exchange the
// roles of X and Z.
struct BlockTable {
  std::size_t n = 0;
  Pauli type = Pauli::Z;
  std::vector<double> h[2];
  std::vector<double> multiplicity;

  double value(std::size_t k, int b) const { return h[b][k]; }
};

inline BlockTable block_table(std::size_t n, Pauli type,
                              const PauliChannel& ch) {
  if (n == 0) throw std::invalid_argument("block length must be >= 1");
  if (type != Pauli::X && type != Pauli::Z) {
    throw std::invalid_argument("block type must be X or Z");
  }
  // "flip" letters change the coset pattern; "keep" letters do not.
  const double keep = ch.pi;
  const double keep_other = type == Pauli::Z ? ch.pz : ch.px;
  const double flip = type == Pauli::Z ? ch.px : ch.pz;
  const double flip_other = ch.py;
  BlockTable table;
  table.n = n;
  table.type = type;
  table.h[0].resize(n + 1);
  table.h[1].resize(n + 1);
  table.multiplicity.resize(n + 1);
  double binom = 1.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double dk = static_cast<double>(k);
    const double rest = static_cast<double>(n - k);
    const double plus =
        std::pow(flip + flip_other, dk) * std::pow(keep + keep_other, rest);
    const double minus =
        std::pow(flip - flip_other, dk) * std::pow(keep - keep_other, rest);
    // Clamp the rounding residue of an exact zero.
    table.h[0][k] = std::max(0.0, 0.5 * (plus + minus));
    table.h[1][k] = std::max(0.0, 0.5 * (plus - minus));
    table.multiplicity[k] = binom;
    binom = binom * static_cast<double>(n - k) / (dk + 1.0);
  }
  return table;
}

namespace detail {

// F^e and F^o of two vectors: half the sum / difference of prod(x+y) and
// prod(x-y).
inline std::array<double, 2> f_even_odd(std::span<const double> x,
                                        std::span<const double> y) {
  double sum = 1.0, diff = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum *= x[i] + y[i];
    diff *= x[i] - y[i];
  }
  return {0.5 * (sum + diff), 0.5 * (sum - diff)};
}

}  // namespace detail

// Stabilizer-coset probabilities (P_S, P_SZ, P_SX, P_SY) of the n x m code
// whose inner blocks are X-type [[n,1]] repetition codes and whose outer
// layer is a Z-type [[m,1]] repetition code, for the coset containing the
// error with per-block pattern (k_i, b_i).
inline std::array<double, 4> concat_rep_coset_probs(
    std::size_t n, std::size_t m, const PauliChannel& ch,
    std::span<const std::size_t> kvec, std::span<const int> bvec) {
  if (kvec.size() != m || bvec.size() != m) {
    throw std::invalid_argument("k and b vectors must have length m = " +
                                std::to_string(m));
  }
  const BlockTable block = block_table(n, Pauli::X, ch);
  std::vector<double> x(m), y(m), xc(m), yc(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (kvec[i] > n || (bvec[i] != 0 && bvec[i] != 1)) {
      throw std::invalid_argument("block pattern out of range");
    }
    const int b = bvec[i];
    x[i] = block.h[b][kvec[i]];
    y[i] = block.h[b][n - kvec[i]];
    xc[i] = block.h[1 - b][kvec[i]];
    yc[i] = block.h[1 - b][n - kvec[i]];
  }
  const auto s = detail::f_even_odd(x, y);
  const auto c = detail::f_even_odd(xc, yc);
  return {s[0], s[1], c[0], c[1]};
}

namespace detail {

// -((1+x) ln(1+x) + (1-x) ln(1-x)) / 2 for x in [0, 1].
inline double psi_abs(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return -std::log(2.0);
  return -0.5 * ((1.0 + x) * std::log1p(x) + (1.0 - x) * std::log1p(-x));
}

// Same, from L = ln x <= 0, accurate when x is within rounding of 1.
inline double psi_from_log(double log_x) {
  if (log_x == -INFINITY) return 0.0;
  if (log_x >= 0.0) return -std::log(2.0);
  const double x = std::exp(log_x);
  const double one_minus = -std::expm1(log_x);
  return -0.5 * ((1.0 + x) * std::log1p(x) + one_minus * std::log(one_minus));
}

// ln(1 + e^L).
inline double softplus(double log_x) {
  if (log_x > 0.0) return log_x + std::log1p(std::exp(-log_x));
  return std::log1p(std::exp(log_x));
}

}  // namespace detail

// Per-block outcome types of the concatenated code, merged over the
// (k, n-k) pairing which leaves |q| and r unchanged.
struct RepBlockType {
  double weight = 0.0;  // probability of the outcome type, summing to 1
  double log_abs_q = 0.0;  // ln |q|, -inf when q = 0
  double log_r = 0.0;      // ln r, -inf when r = 0
};

// The per-block outcome distribution.  With h = h^b_k + h^b_{n-k},
// q = (h^b_k - h^b_{n-k}) / h and r = (h^{1-b}_k + h^{1-b}_{n-k}) / h, the
// block outcome (k, b) occurs with probability C(n,k) h / 2.
inline std::vector<RepBlockType> rep_block_types(std::size_t n,
                                                 const PauliChannel& ch) {
  const BlockTable block = block_table(n, Pauli::X, ch);
  std::vector<RepBlockType> types;
  for (int b = 0; b < 2; ++b) {
    for (std::size_t k = 0; 2 * k <= n; ++k) {
      const double hk = block.h[b][k], hnk = block.h[b][n - k];
      const double sum = hk + hnk;
      if (sum <= 0.0) continue;
      const double pair = 2 * k == n ? 0.5 : 1.0;
      RepBlockType t;
      t.weight = block.multiplicity[k] * sum * pair;
      t.log_abs_q = std::log(std::abs(hk - hnk) / sum);
      t.log_r = std::log((block.h[1 - b][k] + block.h[1 - b][n - k]) / sum);
      types.push_back(t);
    }
  }
  return types;
}

struct RepOptions {
  // Largest number of multisets of block types to enumerate.
  double max_multisets = 2e8;
};

// Number of multisets of size m drawn from `types` kinds.
inline double multiset_count(std::size_t types, std::size_t m) {
  if (types == 0) return m == 0 ? 1.0 : 0.0;
  return std::exp(std::lgamma(static_cast<double>(m + types)) -
                  std::lgamma(static_cast<double>(m + 1)) -
                  std::lgamma(static_cast<double>(types)));
}

// Exact S_RB (bits) of the n x m concatenated repetition code.
//
// Writing u_i = h^{b_i}_{k_i} + h^{b_i}_{n-k_i}, the four stabilizer cosets
// of an outcome are (prod u)(1 +- Q)/2 and (prod u) R (1 +- Q')/2 with
// Q = prod q_i, R = prod r_i.  Summing the entropies over all outcomes, the
// prod-u terms cancel between the stabilizer and normalizer entropies and
// what remains, in nats, is
//
//   S_RB = ln 2 + E[psi(|Q|)] + E[ln(1 + R)],
//
// psi(x) = -((1+x) ln(1+x) + (1-x) ln(1-x))/2, with the blocks drawn
// independently from rep_block_types.  The expectation is evaluated exactly
// over multisets of block types with multinomial weights.
inline double s_rb_rep(std::size_t n, std::size_t m, const PauliChannel& ch,
                       const RepOptions& opts = {}) {
  if (n == 0 || m == 0) throw std::invalid_argument("n and m must be >= 1");
  const auto types = rep_block_types(n, ch);
  const std::size_t t = types.size();
  const double count = multiset_count(t, m);
  if (count > opts.max_multisets) {
    throw std::length_error(
        "s_rb_rep: " + std::to_string(count) +
        " block-type multisets exceed the budget; use the long-code "
        "estimator");
  }
  std::vector<double> log_w(t);
  for (std::size_t i = 0; i < t; ++i) log_w[i] = std::log(types[i].weight);
  const double log_m_fact = std::lgamma(static_cast<double>(m) + 1.0);

  // Depth-first over counts c_0..c_{t-1} summing to m.
  double total = 0.0, compensation = 0.0;
  const auto add = [&](double v) {  // Neumaier summation
    const double s = total + v;
    if (std::abs(total) >= std::abs(v)) {
      compensation += (total - s) + v;
    } else {
      compensation += (v - s) + total;
    }
    total = s;
  };
  struct Frame {
    double log_weight;
    double log_q;
    double log_r;
  };
  std::vector<std::size_t> counts(t, 0);
  const auto recurse = [&](auto&& self, std::size_t type, std::size_t left,
                           Frame f) -> void {
    if (type + 1 == t) {
      const double c = static_cast<double>(left);
      const double log_weight = f.log_weight + c * log_w[type] -
                                std::lgamma(c + 1.0);
      const double lq = left ? f.log_q + c * types[type].log_abs_q : f.log_q;
      const double lr = left ? f.log_r + c * types[type].log_r : f.log_r;
      const double w = std::exp(log_m_fact + log_weight);
      if (w > 0.0) {
        add(w * (detail::psi_from_log(lq) + detail::softplus(lr)));
      }
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      const double dc = static_cast<double>(c);
      Frame next = f;
      if (c > 0) {
        next.log_weight += dc * log_w[type] - std::lgamma(dc + 1.0);
        next.log_q += dc * types[type].log_abs_q;
        next.log_r += dc * types[type].log_r;
      }
      self(self, type + 1, left - c, next);
    }
  };
  recurse(recurse, 0, m, Frame{0.0, 0.0, 0.0});
  const double nats = std::log(2.0) + total + compensation;
  return nats / std::log(2.0);
}

}  // namespace qcoset

#endif  // QCOSET_REP_ENUMERATORS_HPP_
