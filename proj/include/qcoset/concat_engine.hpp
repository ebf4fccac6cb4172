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

// Concatenated code stacks.
//
// Decoding a stack inside out, each inner block's syndrome is measured
// first and leaves its logical qubit in a known conditional Pauli channel.
// The S_RB of the stack is therefore the average, over all assignments of
// inner syndromes, of the outer code's S_RB under the induced per-position
// channels.  Conditional channels that differ only by a known Pauli
// relabeling give the same outer S_RB, so they are pooled; the remaining
// "effective channel set" of each layer is small enough to enumerate for
// the stacks in the threshold tables, with Monte Carlo over assignments as
// the fallback.

#ifndef QCOSET_CONCAT_ENGINE_HPP_
#define QCOSET_CONCAT_ENGINE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcoset/channels.hpp"
#include "qcoset/codes.hpp"
#include "qcoset/exact_engine.hpp"
#include "qcoset/parallel.hpp"
#include "qcoset/registry.hpp"

namespace qcoset {

struct EffectiveEntry {
  double weight = 0.0;
  PauliChannel ch;
};

struct EffectiveChannelSet {
  std::vector<EffectiveEntry> entries;

  double total_weight() const {
    double total = 0.0;
    for (const auto& e : entries) total += e.weight;
    return total;
  }
};

struct GroupingOptions {
  bool enabled = true;
  double tol = 1e-12;
};

// Representative of the channel's orbit under multiplication by a fixed
// Pauli: the relabeling with the largest (p_I, p_X, p_Z) lexicographically.
inline PauliChannel canonical_relabel(const PauliChannel& ch) {
  const auto v = ch.symplectic();
  std::array<double, 4> best = v;
  for (unsigned shift = 1; shift < 4; ++shift) {
    std::array<double, 4> cand;
    for (unsigned a = 0; a < 4; ++a) cand[a] = v[a ^ shift];
    if (std::lexicographical_compare(best.begin(), best.end(), cand.begin(),
                                     cand.end())) {
      best = cand;
    }
  }
  return {best[0], best[1], best[3], best[2]};
}

// Pools entries whose (relabeled) channels agree componentwise within tol.
inline EffectiveChannelSet group_entries(std::vector<EffectiveEntry> raw,
                                         const GroupingOptions& opts) {
  EffectiveChannelSet out;
  if (!opts.enabled) {
    out.entries = std::move(raw);
    return out;
  }
  for (auto& e : raw) e.ch = canonical_relabel(e.ch);
  const auto key = [](const PauliChannel& c) {
    return std::array<double, 4>{c.pi, c.px, c.pz, c.py};
  };
  std::sort(raw.begin(), raw.end(),
            [&](const EffectiveEntry& a, const EffectiveEntry& b) {
              return key(a.ch) > key(b.ch);
            });
  const auto close = [&](const PauliChannel& a, const PauliChannel& b) {
    return std::abs(a.pi - b.pi) <= opts.tol &&
           std::abs(a.px - b.px) <= opts.tol &&
           std::abs(a.py - b.py) <= opts.tol &&
           std::abs(a.pz - b.pz) <= opts.tol;
  };
  for (std::size_t i = 0; i < raw.size();) {
    const PauliChannel leader = raw[i].ch;
    double w = 0.0, pi = 0.0, px = 0.0, py = 0.0, pz = 0.0;
    std::size_t j = i;
    for (; j < raw.size() && close(raw[j].ch, leader); ++j) {
      const double wj = raw[j].weight;
      w += wj;
      pi += wj * raw[j].ch.pi;
      px += wj * raw[j].ch.px;
      py += wj * raw[j].ch.py;
      pz += wj * raw[j].ch.pz;
    }
    out.entries.push_back({w, {pi / w, px / w, py / w, pz / w}});
    i = j;
  }
  return out;
}

namespace detail {

inline void append_conditional_channels(std::span<const double> cells,
                                        double weight,
                                        std::vector<EffectiveEntry>& out) {
  for (std::size_t base = 0; base < cells.size(); base += 4) {
    const double total =
        cells[base] + cells[base + 1] + cells[base + 2] + cells[base + 3];
    if (total <= 0.0) continue;
    out.push_back({weight * total,
                   {cells[base] / total, cells[base + 1] / total,
                    cells[base + 3] / total, cells[base + 2] / total}});
  }
}

}  // namespace detail

// Conditional logical channels of a k = 1 code, one entry per syndrome
// class (pooled when grouping is enabled).
inline EffectiveChannelSet effective_channels(
    const StabilizerCode& code, std::span<const PauliChannel> site_channels,
    const GroupingOptions& grouping = {}, const EngineOptions& engine = {}) {
  if (code.k != 1) {
    throw std::invalid_argument("effective channels need a k = 1 code, '" +
                                code.name + "' has k = " +
                                std::to_string(code.k));
  }
  const CosetTable table = coset_distribution(code, site_channels, engine);
  std::vector<EffectiveEntry> raw;
  detail::append_conditional_channels(table.cells, 1.0, raw);
  return group_entries(std::move(raw), grouping);
}

enum class Strategy { exact, monte_carlo };

struct CodeStack {
  std::vector<StabilizerCode> layers;  // innermost first
  Strategy strategy = Strategy::exact;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;

  std::size_t length() const {
    std::size_t l = 1;
    for (const auto& c : layers) l *= c.n;
    return l;
  }
  std::size_t logical() const { return layers.empty() ? 1 : layers.back().k; }

  std::string description() const {
    std::string s;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      if (i) s += " x ";
      s += layers[i].name;
    }
    return s;
  }
};

inline void validate(const CodeStack& stack) {
  for (std::size_t i = 0; i + 1 < stack.layers.size(); ++i) {
    if (stack.layers[i].k != 1) {
      throw std::invalid_argument("layer '" + stack.layers[i].name +
                                  "' has k = " +
                                  std::to_string(stack.layers[i].k) +
                                  "; only the outermost layer may have k > 1");
    }
  }
}

// Parses "A x B x C" (A innermost).  Each layer is a registry name or a
// code-file path.
inline CodeStack parse_stack(std::string_view spec) {
  CodeStack stack;
  for (const auto& name : split_stack_spec(spec)) {
    stack.layers.push_back(load_code(name));
  }
  validate(stack);
  return stack;
}

struct StackOptions {
  GroupingOptions grouping;
  EngineOptions engine;
  // Largest number of leaf assignments enumerated for one layer.
  double max_assignments = 1e8;
  // Monte Carlo enumerates inner layers exactly up to this many leaves.
  double mc_exact_budget = 2e5;
  unsigned threads = 0;
};

class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

namespace detail {

inline double assignment_count(std::size_t entries, std::size_t positions,
                               bool symmetric) {
  if (!symmetric) {
    return std::pow(static_cast<double>(entries),
                    static_cast<double>(positions));
  }
  return std::round(std::exp(std::lgamma(double(entries + positions)) -
                             std::lgamma(double(positions + 1)) -
                             std::lgamma(double(entries))));
}

// Enumerates every assignment of entries of `set` to the positions of the
// code behind `dp` (non-decreasing sequences with multinomial weights when
// `symmetric`), sharing the per-qubit updates of common prefixes.  Calls
// leaf(branch, weight, cells) where `branch` is the entry index at position
// 0; all leaves of one branch run on the same thread.
template <typename Leaf>
void enumerate_assignments(const CosetDp& dp, const EffectiveChannelSet& set,
                           bool symmetric, unsigned threads, Leaf&& leaf) {
  const std::size_t n = dp.n();
  const std::size_t e = set.entries.size();
  parallel_for(e, threads, [&](std::size_t branch) {
    std::vector<std::vector<double>> states(n + 1);
    dp.init(states[0]);
    // Iterative DFS: choice[d] is the entry placed at position d.
    std::vector<std::size_t> choice(n, 0), run(n, 1);
    std::vector<double> weight(n + 1, 1.0);
    std::size_t depth = 0;
    choice[0] = branch;
    bool descending = true;
    while (true) {
      if (descending) {
        const std::size_t c = choice[depth];
        dp.apply(depth, set.entries[c].ch, states[depth], states[depth + 1]);
        double w = weight[depth] * set.entries[c].weight;
        if (symmetric) {
          run[depth] = (depth > 0 && choice[depth - 1] == c) ? run[depth - 1] + 1
                                                             : 1;
          w *= static_cast<double>(depth + 1) / static_cast<double>(run[depth]);
        }
        weight[depth + 1] = w;
        if (depth + 1 == n) {
          leaf(branch, w, states[n]);
          descending = false;
        } else {
          ++depth;
          choice[depth] = symmetric ? choice[depth - 1] : 0;
          continue;
        }
      }
      // Advance to the next sibling, backtracking as needed.
      while (true) {
        if (depth == 0) return;
        if (choice[depth] + 1 < e) {
          ++choice[depth];
          descending = true;
          break;
        }
        --depth;
      }
    }
  });
}

inline EffectiveChannelSet next_layer_set(const StabilizerCode& code,
                                          const EffectiveChannelSet& inner,
                                          const StackOptions& opts,
                                          double budget) {
  if (inner.entries.size() == 1) {
    const std::vector<PauliChannel> sites(code.n, inner.entries[0].ch);
    auto set = effective_channels(code, sites, opts.grouping, opts.engine);
    for (auto& e : set.entries) e.weight *= inner.entries[0].weight;
    return set;
  }
  const bool symmetric = code.permutation_symmetric;
  const double count =
      assignment_count(inner.entries.size(), code.n, symmetric);
  if (count > budget) {
    throw BudgetExceeded("layer '" + code.name + "' needs " +
                         std::to_string(count) +
                         " channel assignments, above the budget of " +
                         std::to_string(budget));
  }
  const CosetDp dp(code, opts.engine);
  std::vector<std::vector<EffectiveEntry>> per_branch(inner.entries.size());
  enumerate_assignments(
      dp, inner, symmetric, opts.threads,
      [&](std::size_t branch, double w, const std::vector<double>& cells) {
        append_conditional_channels(cells, w, per_branch[branch]);
      });
  std::vector<EffectiveEntry> raw;
  for (auto& part : per_branch) {
    raw.insert(raw.end(), part.begin(), part.end());
  }
  return group_entries(std::move(raw), opts.grouping);
}

}  // namespace detail

// Effective channel set seen by layer `upto + 1`, i.e. after decoding
// layers 0..upto under the physical channel `ch`.
inline EffectiveChannelSet stack_effective_set(const CodeStack& stack,
                                               std::size_t upto,
                                               const PauliChannel& ch,
                                               const StackOptions& opts = {}) {
  EffectiveChannelSet set;
  set.entries.push_back({1.0, ch});
  for (std::size_t l = 0; l <= upto; ++l) {
    set = detail::next_layer_set(stack.layers[l], set, opts,
                                 opts.max_assignments);
  }
  return set;
}

// Outer-layer S_RB averaged over the assignments of `set` to its positions.
inline double s_rb_outer_average(const StabilizerCode& outer,
                                 const EffectiveChannelSet& set,
                                 const StackOptions& opts = {}) {
  const CosetDp dp(outer, opts.engine);
  const std::size_t classes = std::size_t{1} << (2 * outer.k);
  const bool symmetric = outer.permutation_symmetric;
  const double count = detail::assignment_count(set.entries.size(), outer.n,
                                                symmetric);
  if (count > opts.max_assignments) {
    throw BudgetExceeded("outer layer '" + outer.name + "' needs " +
                         std::to_string(count) +
                         " channel assignments, above the budget of " +
                         std::to_string(opts.max_assignments) +
                         "; use Monte Carlo");
  }
  std::vector<double> per_branch(set.entries.size(), 0.0);
  detail::enumerate_assignments(
      dp, set, symmetric, opts.threads,
      [&](std::size_t branch, double w, const std::vector<double>& cells) {
        per_branch[branch] += w * s_rb_cells(cells, classes);
      });
  double total = 0.0;
  for (double v : per_branch) total += v;
  return total;
}

// Exact S_RB (bits) of a stack under the physical channel `ch`.
inline double s_rb_stack_exact(const CodeStack& stack, const PauliChannel& ch,
                               const StackOptions& opts = {}) {
  validate(stack);
  const std::size_t d = stack.layers.size();
  if (d == 0) return channel_entropy(ch);
  if (d == 1) {
    return s_rb_exact(coset_distribution(stack.layers[0], ch, opts.engine));
  }
  const EffectiveChannelSet inner = stack_effective_set(stack, d - 2, ch, opts);
  return s_rb_outer_average(stack.layers[d - 1], inner, opts);
}

// Counter-based generator: the stream for (seed, sample) is a pure function
// of those two values, so samples can be drawn in any order or thread.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t sample)
      : key_(mix(seed ^ mix(sample + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++count_); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t count_ = 0;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// Monte Carlo S_RB of a stack: inner syndrome assignments are sampled from
// their exact joint distribution and the outer S_RB is evaluated exactly for
// each.  Inner layers are enumerated exactly while cheap; above that, each
// inner block's channel is drawn by sampling its own inner assignment and
// then its syndrome.
inline McEstimate s_rb_stack_mc(const CodeStack& stack, const PauliChannel& ch,
                                std::size_t samples, std::uint64_t seed,
                                const StackOptions& opts = {}) {
  validate(stack);
  const std::size_t d = stack.layers.size();
  if (d < 2) return {s_rb_stack_exact(stack, ch, opts), 0.0, samples};
  if (samples < 2) throw std::invalid_argument("Monte Carlo needs >= 2 samples");

  // Exact sets for layers 0..exact_upto.
  std::vector<EffectiveChannelSet> sets;
  {
    EffectiveChannelSet set;
    set.entries.push_back({1.0, ch});
    for (std::size_t l = 0; l + 1 < d; ++l) {
      try {
        set = detail::next_layer_set(stack.layers[l], set, opts,
                                     opts.mc_exact_budget);
      } catch (const BudgetExceeded&) {
        break;
      }
      sets.push_back(set);
    }
  }
  std::vector<std::vector<double>> cdfs;
  for (const auto& set : sets) {
    std::vector<double> cdf;
    double acc = 0.0;
    const double total = set.total_weight();
    for (const auto& e : set.entries) {
      acc += e.weight / total;
      cdf.push_back(acc);
    }
    cdf.back() = 1.0;
    cdfs.push_back(std::move(cdf));
  }
  std::vector<CosetDp> dps;
  for (const auto& layer : stack.layers) dps.emplace_back(layer, opts.engine);

  // Channel seen by a position of layer `level + 1`.
  const auto draw = [&](auto&& self, std::size_t level,
                        CounterRng& rng) -> PauliChannel {
    if (level < sets.size()) {
      const double u = rng.uniform();
      const auto& cdf = cdfs[level];
      const std::size_t idx = static_cast<std::size_t>(
          std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      return sets[level].entries[std::min(idx, cdf.size() - 1)].ch;
    }
    const StabilizerCode& code = stack.layers[level];
    const CosetDp& dp = dps[level];
    std::vector<double> a, b;
    dp.init(a);
    for (std::size_t i = 0; i < code.n; ++i) {
      const PauliChannel site = level == 0 ? ch : self(self, level - 1, rng);
      dp.apply(i, site, a, b);
      a.swap(b);
    }
    double u = rng.uniform();
    for (std::size_t base = 0; base < a.size(); base += 4) {
      const double total = a[base] + a[base + 1] + a[base + 2] + a[base + 3];
      if (total <= 0.0) continue;
      u -= total;
      if (u < 0.0 || base + 4 == a.size()) {
        return {a[base] / total, a[base + 1] / total, a[base + 3] / total,
                a[base + 2] / total};
      }
    }
    return {1.0, 0.0, 0.0, 0.0};
  };

  const StabilizerCode& outer = stack.layers[d - 1];
  const CosetDp& outer_dp = dps[d - 1];
  const std::size_t classes = std::size_t{1} << (2 * outer.k);
  std::vector<double> values(samples);
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  parallel_for(chunks, opts.threads, [&](std::size_t chunk) {
    std::vector<double> a, b;
    for (std::size_t s = chunk * kChunk;
         s < std::min(samples, (chunk + 1) * kChunk); ++s) {
      CounterRng rng(seed, s);
      outer_dp.init(a);
      for (std::size_t i = 0; i < outer.n; ++i) {
        outer_dp.apply(i, draw(draw, d - 2, rng), a, b);
        a.swap(b);
      }
      values[s] = s_rb_cells(a, classes);
    }
  });
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(samples);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples)), samples};
}

// The flat code of a stack: inner generators on every block, plus the
// outer generators and logicals with each letter replaced by the inner
// logical operator of that letter.
inline StabilizerCode compose_stack(const CodeStack& stack) {
  validate(stack);
  if (stack.layers.empty()) {
    throw std::invalid_argument("cannot compose an empty stack");
  }
  StabilizerCode code = stack.layers[0];
  for (std::size_t l = 1; l < stack.layers.size(); ++l) {
    const StabilizerCode& outer = stack.layers[l];
    const std::size_t bn = code.n;
    const std::size_t n = bn * outer.n;
    const auto lift = [&](const PauliString& p) {
      PauliString out(n);
      for (std::size_t j = 0; j < outer.n; ++j) {
        PauliString block(bn);
        const Pauli letter = p[j];
        if (letter == Pauli::X || letter == Pauli::Y) block *= code.logical_x[0];
        if (letter == Pauli::Z || letter == Pauli::Y) block *= code.logical_z[0];
        for (std::size_t i = 0; i < bn; ++i) out.set(j * bn + i, block[i]);
      }
      return out;
    };
    StabilizerCode next;
    next.name = code.name + " x " + outer.name;
    next.n = n;
    next.k = outer.k;
    for (std::size_t j = 0; j < outer.n; ++j) {
      for (const auto& g : code.generators) {
        PauliString out(n);
        for (std::size_t i = 0; i < bn; ++i) out.set(j * bn + i, g[i]);
        next.generators.push_back(std::move(out));
      }
    }
    for (const auto& g : outer.generators) next.generators.push_back(lift(g));
    for (const auto& lx : outer.logical_x) next.logical_x.push_back(lift(lx));
    for (const auto& lz : outer.logical_z) next.logical_z.push_back(lift(lz));
    code = std::move(next);
  }
  return code;
}

}  // namespace qcoset

#endif  // QCOSET_CONCAT_ENGINE_HPP_
