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

// Rates, thresholds and sweeps.
//
// A RateModel wraps any S_RB evaluator (stack engine, closed-form
// repetition pair, long-code estimator) behind one interface; the rate of a
// code of length l with k logical qubits, followed by random hashing, is
// (k - S_RB) / l.

#ifndef QCOSET_CAPACITY_HPP_
#define QCOSET_CAPACITY_HPP_

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcoset/channels.hpp"
#include "qcoset/concat_engine.hpp"
#include "qcoset/longrep.hpp"
#include "qcoset/parallel.hpp"
#include "qcoset/rep_enumerators.hpp"

namespace qcoset {

enum class Method { exact, grouped, mc, longrep };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::exact:
      return "exact";
    case Method::grouped:
      return "grouped";
    case Method::mc:
      return "mc";
    case Method::longrep:
      return "longrep";
  }
  return "?";
}

struct SrbValue {
  double s_rb = 0.0;  // bits
  double std_error = 0.0;
  bool stable = true;
};

struct RateModel {
  std::string description;
  std::size_t length = 1;
  std::size_t logical = 1;
  Method method = Method::exact;
  std::function<SrbValue(const PauliChannel&)> s_rb;

  bool deterministic() const { return method != Method::mc; }
};

inline RateModel stack_model(const CodeStack& stack,
                             const StackOptions& opts = {}) {
  validate(stack);
  RateModel model;
  model.description = stack.description();
  model.length = stack.length();
  model.logical = stack.logical();
  if (stack.strategy == Strategy::monte_carlo && stack.layers.size() > 1) {
    model.method = Method::mc;
    model.s_rb = [stack, opts](const PauliChannel& ch) {
      const auto est = s_rb_stack_mc(stack, ch, stack.samples, stack.seed, opts);
      return SrbValue{est.mean, est.std_error, true};
    };
    return model;
  }
  model.method = stack.layers.size() > 1 && opts.grouping.enabled
                     ? Method::grouped
                     : Method::exact;
  model.s_rb = [stack, opts](const PauliChannel& ch) {
    return SrbValue{s_rb_stack_exact(stack, ch, opts), 0.0, true};
  };
  return model;
}

// Closed-form n x m pair: an X-type [[n,1]] block code inside a Z-type
// [[m,1]] code (equivalently repZ(n) x repX(m) with X and Z exchanged).
inline RateModel rep_concat_model(std::size_t n, std::size_t m,
                                  const RepOptions& opts = {}) {
  RateModel model;
  model.description = std::to_string(n) + "x" + std::to_string(m) + " rep";
  model.length = n * m;
  model.logical = 1;
  model.method = Method::exact;
  model.s_rb = [n, m, opts](const PauliChannel& ch) {
    return SrbValue{s_rb_rep(n, m, ch, opts), 0.0, true};
  };
  return model;
}

inline RateModel longrep_model(std::size_t n, std::size_t m,
                               const LongRepOptions& opts = {}) {
  RateModel model;
  model.description = std::to_string(n) + "x" + std::to_string(m) + " rep";
  model.length = n * m;
  model.logical = 1;
  model.method = Method::longrep;
  model.s_rb = [n, m, opts](const PauliChannel& ch) {
    const auto est = s_rb_estimate(n, m, ch, opts);
    return SrbValue{est.s_rb, 0.0, est.stable};
  };
  return model;
}

struct RatePoint {
  double p = 0.0;
  double s_rb = 0.0;
  double rate = 0.0;
  Method method = Method::exact;
  double std_error = 0.0;  // of the rate; 0 for deterministic methods
  bool stable = true;
};

inline RatePoint rate(const RateModel& model, const ChannelFamily& family,
                      double p) {
  const PauliChannel ch = family_eval(family, p);
  const SrbValue v = model.s_rb(ch);
  const double l = static_cast<double>(model.length);
  return {p,
          v.s_rb,
          (static_cast<double>(model.logical) - v.s_rb) / l,
          model.method,
          v.std_error / l,
          v.stable};
}

// Rate in excess of random hashing alone.
inline double nonadditivity(const RatePoint& point, const ChannelFamily& family) {
  return point.rate - std::max(0.0, 1.0 - family_entropy(family, point.p));
}

struct ThresholdOptions {
  double tol = 1e-10;     // final bracket width (deterministic methods)
  double mc_tol = 1e-7;   // bisection resolution on the Monte Carlo estimate
  double mc_slope_step = 2e-5;
  std::optional<double> lo;  // default: half the hashing point
  std::optional<double> hi;  // default: twice the hashing point, else the
                             // family's upper limit
};

struct ThresholdResult {
  std::string description;
  ChannelFamily family;
  Method method = Method::exact;
  double threshold = 0.0;
  double bracket_lo = 0.0;  // rate > 0 here (deterministic methods)
  double bracket_hi = 0.0;  // rate < 0 here
  double rate_lo = 0.0;
  double rate_hi = 0.0;
  double tolerance = 0.0;   // bracket width achieved
  double std_error = 0.0;   // Monte Carlo standard error on the threshold
  bool bracketed = false;
  bool stable = true;
  std::size_t evaluations = 0;
  std::string message;
};

// Largest p in the bracket where the rate changes sign from positive to
// negative.  Deterministic methods return a bracket [lo, hi] with
// rate(lo) > 0 > rate(hi) and hi - lo <= tol; TOMS748 steps are only taken
// inside such a verified bracket.  Monte Carlo bisects the estimate computed
// with common random numbers and converts the rate's standard error into a
// threshold standard error through the local slope.
inline ThresholdResult threshold(const RateModel& model,
                                 const ChannelFamily& family,
                                 const ThresholdOptions& opts = {}) {
  ThresholdResult res;
  res.description = model.description;
  res.family = family;
  res.method = model.method;
  const double upper = family.upper_limit();
  const double hash = hashing_point(family);
  double lo = opts.lo.value_or(0.5 * hash);
  double hi = opts.hi.value_or(upper);
  if (!(lo > 0.0 && lo < hi && hi <= upper)) {
    throw std::invalid_argument("threshold bracket must satisfy 0 < lo < hi <= " +
                                std::to_string(upper));
  }
  const auto f = [&](double p) {
    ++res.evaluations;
    const RatePoint r = rate(model, family, p);
    if (!r.stable) res.stable = false;
    return r.rate;
  };
  double f_lo = f(lo);
  if (!(f_lo > 0.0)) {
    res.message = "rate is not positive at the lower bracket end";
    res.bracket_lo = lo;
    res.rate_lo = f_lo;
    return res;
  }
  double f_hi;
  if (!opts.hi && 2.0 * hash < upper) {
    const double mid = 2.0 * hash;
    const double f_mid = f(mid);
    if (f_mid < 0.0) {
      hi = mid;
      f_hi = f_mid;
    } else {
      f_hi = f(hi);
    }
  } else {
    f_hi = f(hi);
  }
  if (!(f_hi < 0.0)) {
    res.message = "rate does not change sign on the bracket";
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    res.rate_lo = f_lo;
    res.rate_hi = f_hi;
    return res;
  }

  if (model.deterministic()) {
    const double tol = opts.tol;
    std::uintmax_t max_iter = 300;
    const auto done = [tol](double a, double b) { return b - a <= tol; };
    const auto [a, b] = boost::math::tools::toms748_solve(
        f, lo, hi, f_lo, f_hi, done, max_iter);
    res.bracket_lo = a;
    res.bracket_hi = b;
    // Certificate: re-evaluated endpoints bound the root.
    res.rate_lo = f(a);
    res.rate_hi = f(b);
    res.bracketed = res.rate_lo > 0.0 && res.rate_hi < 0.0;
    if (!res.bracketed && res.rate_lo == 0.0) {
      res.bracketed = true;  // exact root at a
      res.bracket_hi = a;
    }
    res.threshold = 0.5 * (res.bracket_lo + res.bracket_hi);
    res.tolerance = res.bracket_hi - res.bracket_lo;
    if (!res.bracketed) res.message = "bracket certificate failed";
    return res;
  }

  // Monte Carlo: deterministic estimate thanks to fixed seeds.
  while (hi - lo > opts.mc_tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm > 0.0) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
      f_hi = fm;
    }
  }
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  res.rate_lo = f_lo;
  res.rate_hi = f_hi;
  res.threshold = 0.5 * (lo + hi);
  res.tolerance = hi - lo;
  res.bracketed = true;
  const double h = opts.mc_slope_step;
  const RatePoint left = rate(model, family, res.threshold - h);
  const RatePoint right = rate(model, family, res.threshold + h);
  res.evaluations += 2;
  const double slope = (right.rate - left.rate) / (2.0 * h);
  const double se_rate = 0.5 * (left.std_error + right.std_error);
  res.std_error = slope != 0.0 ? se_rate / std::abs(slope) : INFINITY;
  return res;
}

// Rates at `steps` evenly spaced points of [a, b], emitted in order through
// `emit` as each chunk of up to `threads` points completes.
inline std::vector<RatePoint> sweep(
    const RateModel& model, const ChannelFamily& family, double a, double b,
    std::size_t steps, unsigned threads = 0,
    const std::function<void(const RatePoint&)>& emit = {}) {
  if (steps < 2) throw std::invalid_argument("sweep needs at least 2 steps");
  if (threads == 0) threads = default_threads();
  std::vector<RatePoint> rows(steps);
  const auto at = [&](std::size_t i) {
    return i + 1 == steps
               ? b
               : a + (b - a) * static_cast<double>(i) /
                         static_cast<double>(steps - 1);
  };
  for (std::size_t start = 0; start < steps; start += threads) {
    const std::size_t count = std::min<std::size_t>(threads, steps - start);
    parallel_for(count, threads, [&](std::size_t j) {
      rows[start + j] = rate(model, family, at(start + j));
    });
    if (emit) {
      for (std::size_t j = 0; j < count; ++j) emit(rows[start + j]);
    }
  }
  return rows;
}

}  // namespace qcoset

#endif  // QCOSET_CAPACITY_HPP_
