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

// Channel optimization: for a fixed code, search the custom channels
// (1 - p, cX p, cY p, cZ p) for the largest rate at each channel's own
// hashing point.  The objective is cheap for small codes but not smooth
// enough to trust gradients near the floor, so the search is a multi-start
// Nelder-Mead over an unconstrained two-parameter chart of the simplex.

#ifndef QCOSET_OPTIMIZER_HPP_
#define QCOSET_OPTIMIZER_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcoset/capacity.hpp"
#include "qcoset/channels.hpp"
#include "qcoset/parallel.hpp"

namespace qcoset {

using Coefficients = std::array<double, 3>;  // (cX, cY, cZ)

struct HashingRate {
  double p_hash = 0.0;
  double q = 0.0;  // rate of the code at p_hash
};

inline HashingRate nonadditivity_at_hashing(
    const RateModel& model, const Coefficients& c,
    std::optional<double> hint = std::nullopt) {
  const ChannelFamily family = ChannelFamily::custom(c[0], c[1], c[2]);
  HashingRate out;
  out.p_hash = hashing_point(family, hint);
  out.q = rate(model, family, out.p_hash).rate;
  return out;
}

// Minimizes f over R^d from x0 with an initial simplex of edge `step`.
// Stops after max_evals evaluations or when `converged` accepts the
// simplex vertices.  Returns the best vertex and its value.
struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
};

inline NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double step, std::size_t max_evals,
    const std::function<bool(const std::vector<std::vector<double>>&)>&
        converged) {
  const std::size_t d = x0.size();
  std::vector<std::vector<double>> xs{x0};
  for (std::size_t i = 0; i < d; ++i) {
    auto x = x0;
    x[i] += step;
    xs.push_back(x);
  }
  NelderMeadResult res;
  std::vector<double> fs;
  for (const auto& x : xs) {
    fs.push_back(f(x));
    ++res.evaluations;
  }
  // Past the budget, candidates are rejected unevaluated so the cap is exact.
  const auto eval = [&](const std::vector<double>& x) {
    if (res.evaluations >= max_evals) {
      return std::numeric_limits<double>::infinity();
    }
    ++res.evaluations;
    return f(x);
  };
  std::vector<std::size_t> order(d + 1);
  while (true) {
    for (std::size_t i = 0; i <= d; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    {
      std::vector<std::vector<double>> sx;
      std::vector<double> sf;
      for (std::size_t i : order) {
        sx.push_back(xs[i]);
        sf.push_back(fs[i]);
      }
      xs.swap(sx);
      fs.swap(sf);
    }
    if (res.evaluations >= max_evals || converged(xs)) break;
    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) centroid[j] += xs[i][j] / d;
    }
    const auto along = [&](double t) {
      std::vector<double> x(d);
      for (std::size_t j = 0; j < d; ++j) {
        x[j] = centroid[j] + t * (xs[d][j] - centroid[j]);
      }
      return x;
    };
    const auto xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < fs[0]) {
      const auto xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        xs[d] = xe;
        fs[d] = fe;
      } else {
        xs[d] = xr;
        fs[d] = fr;
      }
    } else if (fr < fs[d - 1]) {
      xs[d] = xr;
      fs[d] = fr;
    } else {
      const bool outside = fr < fs[d];
      const auto xc = along(outside ? -0.5 : 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fs[d])) {
        xs[d] = xc;
        fs[d] = fc;
      } else {
        for (std::size_t i = 1; i <= d; ++i) {
          for (std::size_t j = 0; j < d; ++j) {
            xs[i][j] = xs[0][j] + 0.5 * (xs[i][j] - xs[0][j]);
          }
          fs[i] = eval(xs[i]);
        }
      }
    }
  }
  res.x = xs[0];
  res.value = fs[0];
  return res;
}

// Chart from R^2 onto the coefficient simplex with every coefficient in
// [floor, 1 - 2 floor]: a softmax of (u, v, 0), affinely shrunk.
inline Coefficients coefficients_from_chart(double u, double v) {
  const double m = std::max({u, v, 0.0});
  const double a = std::exp(u - m), b = std::exp(v - m), c = std::exp(-m);
  const double s = a + b + c;
  const double f = kCustomCoefficientFloor;
  const double scale = 1.0 - 3.0 * f;
  return {f + scale * a / s, f + scale * b / s, f + scale * c / s};
}

inline std::array<double, 2> chart_from_coefficients(const Coefficients& c) {
  const double f = kCustomCoefficientFloor;
  const auto s = [&](double x) { return std::max(x - f, 1e-300); };
  return {std::log(s(c[0]) / s(c[2])), std::log(s(c[1]) / s(c[2]))};
}

struct OptimizerOptions {
  std::size_t restarts = 12;
  std::uint64_t seed = 1;
  std::size_t max_evals = 400;   // per restart
  double diameter = 1e-6;        // in coefficient space
  double initial_step = 1.0;     // in chart coordinates
  unsigned threads = 0;
};

struct RestartTrace {
  Coefficients start{};
  Coefficients best{};
  double q = 0.0;
  double p_hash = 0.0;
  std::size_t evaluations = 0;
};

struct OptimizationResult {
  std::string description;
  Coefficients coefficients{};
  double p_hash = 0.0;
  double q = 0.0;
  std::vector<RestartTrace> trace;
};

// Start points: three near-vertex biased channels, then an additive
// quasi-random (R2) sequence offset by the seed.
inline std::vector<Coefficients> optimizer_starts(std::size_t restarts,
                                                  std::uint64_t seed) {
  std::vector<Coefficients> starts;
  const double hi = 0.96, lo = 0.02;
  const Coefficients vertices[3] = {{hi, lo, lo}, {lo, hi, lo}, {lo, lo, hi}};
  for (std::size_t i = 0; i < std::min<std::size_t>(3, restarts); ++i) {
    starts.push_back(vertices[i]);
  }
  // Plastic-number constants of the R2 sequence.
  const double g = 1.32471795724474602596;
  const double a1 = 1.0 / g, a2 = 1.0 / (g * g);
  const double offset = std::fmod(0.5 + 0.6180339887498949 *
                                            static_cast<double>(seed % 1000003),
                                  1.0);
  for (std::size_t i = 1; starts.size() < restarts; ++i) {
    const double x = std::fmod(offset + a1 * static_cast<double>(i), 1.0);
    const double y = std::fmod(offset + a2 * static_cast<double>(i), 1.0);
    // Uniform point of the triangle by folding the unit square.
    double s = x, t = y;
    if (s + t > 1.0) {
      s = 1.0 - s;
      t = 1.0 - t;
    }
    const double f = kCustomCoefficientFloor * 10.0;
    const double scale = 1.0 - 3.0 * f;
    starts.push_back({f + scale * s, f + scale * t, f + scale * (1.0 - s - t)});
  }
  return starts;
}

inline OptimizationResult optimize_channel(const RateModel& model,
                                           const OptimizerOptions& opts = {}) {
  if (!model.deterministic()) {
    throw std::invalid_argument(
        "channel optimization needs a deterministic evaluation method");
  }
  if (opts.restarts == 0) throw std::invalid_argument("restarts must be >= 1");
  const auto starts = optimizer_starts(opts.restarts, opts.seed);
  std::vector<RestartTrace> trace(starts.size());
  parallel_for(starts.size(), opts.threads, [&](std::size_t r) {
    RestartTrace& tr = trace[r];
    tr.start = starts[r];
    std::optional<double> hint;
    const auto objective = [&](const std::vector<double>& x) {
      const Coefficients c = coefficients_from_chart(x[0], x[1]);
      try {
        const HashingRate hr = nonadditivity_at_hashing(model, c, hint);
        hint = hr.p_hash;
        return -hr.q;
      } catch (const std::domain_error&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    const auto converged = [&](const std::vector<std::vector<double>>& xs) {
      double diam = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto ci = coefficients_from_chart(xs[i][0], xs[i][1]);
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
          const auto cj = coefficients_from_chart(xs[j][0], xs[j][1]);
          for (int k = 0; k < 3; ++k) diam = std::max(diam, std::abs(ci[k] - cj[k]));
        }
      }
      return diam < opts.diameter;
    };
    const auto x0 = chart_from_coefficients(starts[r]);
    const auto nm = nelder_mead(objective, {x0[0], x0[1]}, opts.initial_step,
                                opts.max_evals, converged);
    tr.best = coefficients_from_chart(nm.x[0], nm.x[1]);
    const HashingRate hr = nonadditivity_at_hashing(model, tr.best);
    tr.q = hr.q;
    tr.p_hash = hr.p_hash;
    tr.evaluations = nm.evaluations;
  });
  OptimizationResult res;
  res.description = model.description;
  res.trace = trace;
  std::size_t best = 0;
  for (std::size_t r = 1; r < trace.size(); ++r) {
    if (trace[r].q > trace[best].q ||
        (trace[r].q == trace[best].q && trace[r].best < trace[best].best)) {
      best = r;
    }
  }
  res.coefficients = trace[best].best;
  res.q = trace[best].q;
  res.p_hash = trace[best].p_hash;
  return res;
}

}  // namespace qcoset

#endif  // QCOSET_OPTIMIZER_HPP_
