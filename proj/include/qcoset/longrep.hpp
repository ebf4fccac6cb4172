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

// Entropy estimates for long n x m concatenated repetition codes.
//
// With the per-block quantities of rep_block_types, S_RB (nats) is
//
//   ln 2 + E[phi(Q)] + E[ln(1 + R)],   Q = prod q_i,  R = prod r_i,
//
// phi(x) = -(1+x) ln(1+x), over m independent block outcomes.  Both
// expectations only need the distribution of a sum of m i.i.d. log
// magnitudes (plus a sign for Q).  That distribution is binned on a uniform
// grid of width alpha and raised to the m-th convolution power by FFT.
//
// Binning uses three-point moment matching: an atom at (j + f) alpha, with
// |f| <= 1/2, is split over bins j-1, j, j+1 with weights (f^2 - f)/2,
// 1 - f^2, (f^2 + f)/2, which keeps its mean and variance exactly.  The
// binned kernel's characteristic function stays inside the unit disk, so
// large powers remain stable.
//
// E[phi(Q)] is singular as |Q| -> 1, i.e. when every block lands on an
// outcome with ln|q| near 0.  Outcomes are therefore split into magnitude
// levels and the power is decomposed by the largest level present:
// D_j = K_{<=j}^m - K_{<j}^m lives at distance >= d_j (the smallest
// magnitude of level j) from the singularity, and is computed on a grid
// whose width is a fixed fraction of d_j.  Grids come from the ladder
// alpha_0 2^j.

#ifndef QCOSET_LONGREP_HPP_
#define QCOSET_LONGREP_HPP_

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include "qcoset/channels.hpp"
#include "qcoset/rep_enumerators.hpp"

namespace qcoset {

// One (k, b) outcome of an X-type inner block.
struct QrCell {
  std::size_t k = 0;
  int b = 0;
  double q = 0.0;
  double r = 0.0;
  double ln_h_sum = 0.0;  // ln(h^b_k + h^b_{n-k})
  double block_weight = 0.0;
  bool zero_weight = false;  // h^b_k + h^b_{n-k} = 0: q, r undefined
};

inline std::vector<QrCell> qr_coefficients(std::size_t n,
                                           const PauliChannel& ch) {
  const BlockTable block = block_table(n, Pauli::X, ch);
  std::vector<QrCell> cells;
  for (int b = 0; b < 2; ++b) {
    for (std::size_t k = 0; k <= n; ++k) {
      QrCell c;
      c.k = k;
      c.b = b;
      const double sum = block.h[b][k] + block.h[b][n - k];
      if (sum <= 0.0) {
        c.zero_weight = true;
        c.ln_h_sum = -std::numeric_limits<double>::infinity();
      } else {
        c.q = (block.h[b][k] - block.h[b][n - k]) / sum;
        c.r = (block.h[1 - b][k] + block.h[1 - b][n - k]) / sum;
        c.ln_h_sum = std::log(sum);
        c.block_weight = 0.5 * block.multiplicity[k] * sum;
      }
      cells.push_back(c);
    }
  }
  return cells;
}

// A weighted point (sign, ln magnitude); magnitude 0 is log_mag = -inf.
struct LogAtom {
  double weight = 0.0;
  int sign = 1;
  double log_mag = 0.0;
};

// Binned masses over (sign, ln magnitude).  plus[i] and minus[i] sit at
// log-magnitude alpha * (first_bin + i); zero_mass is the exact mass at
// magnitude 0.  Masses may be slightly negative after moment-matched
// binning.
struct SignedLogDistribution {
  double alpha = 1e-4;
  std::int64_t first_bin = 0;
  std::vector<double> plus;
  std::vector<double> minus;
  double zero_mass = 0.0;
  double tail_mass = 0.0;  // bound on mass lost outside the window
  double noise = 0.0;      // measured FFT roundoff per bin (RMS)

  double value(std::size_t i) const {
    return alpha * static_cast<double>(first_bin + static_cast<std::int64_t>(i));
  }
  std::size_t size() const { return plus.size(); }
  double total_mass() const {
    double t = zero_mass;
    for (std::size_t i = 0; i < plus.size(); ++i) t += plus[i] + minus[i];
    return t;
  }
};

inline SignedLogDistribution bin_atoms(std::span<const LogAtom> atoms,
                                       double alpha) {
  SignedLogDistribution d;
  d.alpha = alpha;
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& a : atoms) {
    if (a.weight == 0.0 || a.log_mag == -INFINITY) continue;
    const auto j = static_cast<std::int64_t>(std::llround(a.log_mag / alpha));
    lo = std::min(lo, j - 1);
    hi = std::max(hi, j + 1);
  }
  for (const auto& a : atoms) {
    if (a.log_mag == -INFINITY) d.zero_mass += a.weight;
  }
  if (lo > hi) return d;
  d.first_bin = lo;
  d.plus.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  d.minus.assign(d.plus.size(), 0.0);
  for (const auto& a : atoms) {
    if (a.weight == 0.0 || a.log_mag == -INFINITY) continue;
    const double x = a.log_mag / alpha;
    const auto j = static_cast<std::int64_t>(std::llround(x));
    const double f = x - static_cast<double>(j);
    auto& target = a.sign >= 0 ? d.plus : d.minus;
    const std::size_t at = static_cast<std::size_t>(j - lo);
    target[at - 1] += a.weight * 0.5 * (f * f - f);
    target[at] += a.weight * (1.0 - f * f);
    target[at + 1] += a.weight * 0.5 * (f * f + f);
  }
  return d;
}

namespace detail {

// Real-to-complex FFT of a fixed size with plans made once per object.
class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    real_ = fftw_alloc_real(n);
    spec_ = fftw_alloc_complex(n / 2 + 1);
    if (!real_ || !spec_) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_, spec_,
                                    FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_, real_,
                                     FFTW_ESTIMATE);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft() {
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(forward_);
      fftw_destroy_plan(backward_);
    }
    fftw_free(real_);
    fftw_free(spec_);
  }

  std::size_t size() const { return n_; }
  std::size_t spectrum_size() const { return n_ / 2 + 1; }

  // Transforms `in` (length n) and returns the half spectrum.
  std::vector<std::complex<double>> forward(const std::vector<double>& in) {
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(forward_);
    std::vector<std::complex<double>> out(spectrum_size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = {spec_[i][0], spec_[i][1]};
    }
    return out;
  }

  // Inverse transform, normalized.
  std::vector<double> backward(const std::vector<std::complex<double>>& in) {
    for (std::size_t i = 0; i < in.size(); ++i) {
      spec_[i][0] = in[i].real();
      spec_[i][1] = in[i].imag();
    }
    fftw_execute(backward_);
    std::vector<double> out(real_, real_ + n_);
    const double scale = 1.0 / static_cast<double>(n_);
    for (double& v : out) v *= scale;
    return out;
  }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

  std::size_t n_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

inline std::complex<double> ipow(std::complex<double> z, std::size_t m) {
  std::complex<double> result(1.0, 0.0);
  while (m) {
    if (m & 1u) result *= z;
    m >>= 1;
    if (m) z *= z;
  }
  return result;
}

inline std::size_t fft_size_for(std::size_t bins) {
  std::size_t n = 64;
  while (n < bins) n <<= 1;
  return n;
}

// Chernoff half-widths (below, above the mean m*mu) outside which the sum
// of m draws from the weighted points (w_i, x_i) has probability <= eps on
// each side.  Returns {mu, lower_width, upper_width}.
struct ChernoffWindow {
  double mean = 0.0;
  double below = 0.0;
  double above = 0.0;
};

inline ChernoffWindow chernoff_window(std::span<const double> w,
                                      std::span<const double> x, double m,
                                      double eps) {
  double total = 0.0, mu = 0.0, xmin = INFINITY, xmax = -INFINITY;
  for (std::size_t i = 0; i < w.size(); ++i) {
    total += w[i];
    mu += w[i] * x[i];
    xmin = std::min(xmin, x[i]);
    xmax = std::max(xmax, x[i]);
  }
  mu /= total;
  const double range = std::max(xmax - xmin, 1e-300);
  const double log_eps = std::log(eps);
  // ln E exp(theta (X - mu)), theta of either sign.
  const auto cgf = [&](double theta) {
    double mx = -INFINITY;
    for (std::size_t i = 0; i < w.size(); ++i) {
      mx = std::max(mx, theta * (x[i] - mu));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      s += w[i] / total * std::exp(theta * (x[i] - mu) - mx);
    }
    return mx + std::log(s);
  };
  // Best exponent for deviation t in direction dir (+1 above, -1 below).
  const auto rate = [&](double t, double dir) {
    double a = std::log(1e-8 / range), b = std::log(1e8 / range);
    const auto f = [&](double u) {
      const double theta = std::exp(u);
      return theta * t - m * cgf(dir * theta);
    };
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 120; ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = f(d);
      }
    }
    return std::max({0.0, fc, fd});
  };
  const auto width = [&](double dir, double max_dev) {
    if (max_dev <= 0.0) return 0.0;
    if (rate(max_dev, dir) < -log_eps) return max_dev;
    double lo = 0.0, hi = max_dev;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (rate(mid, dir) >= -log_eps) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  };
  ChernoffWindow cw;
  cw.mean = mu;
  cw.above = width(+1.0, m * (xmax - mu));
  cw.below = width(-1.0, m * (mu - xmin));
  return cw;
}

}  // namespace detail

struct ConvolveOptions {
  std::size_t max_bins = std::size_t{1} << 22;
  double tail_eps = 1e-14;  // per-side Chernoff tail allowed outside window
  // Repeat the power on a rotated buffer to measure roundoff (twice the
  // work).
  bool measure_noise = true;
};

// The m-fold convolution power of `full` minus that of `sub` (pass an empty
// `sub` for the plain power), on full's grid.  `window_atoms` are the
// unbinned atoms of `full`, used to size a truncated window when the whole
// support would not fit in max_bins.
inline SignedLogDistribution power_difference(
    const SignedLogDistribution& full, const SignedLogDistribution* sub,
    std::size_t m, std::span<const LogAtom> window_atoms,
    const ConvolveOptions& opts = {}) {
  if (m == 0) throw std::invalid_argument("convolution power needs m >= 1");
  SignedLogDistribution out;
  out.alpha = full.alpha;
  const double full_nonzero = 1.0 - full.zero_mass;
  out.zero_mass = -std::expm1(static_cast<double>(m) *
                              std::log1p(-std::min(full.zero_mass, 1.0)));
  if (sub) {
    out.zero_mass = 0.0;  // the difference carries no magnitude-0 mass
  }
  if (full.size() == 0 || full_nonzero <= 0.0) return out;

  const std::int64_t lo = full.first_bin;
  const auto n_in = static_cast<std::int64_t>(full.size());
  // Support of the m-fold sum, in bins.
  const std::int64_t sum_lo = static_cast<std::int64_t>(m) * lo;
  const std::int64_t sum_hi =
      static_cast<std::int64_t>(m) * (lo + n_in - 1);
  std::int64_t w0 = sum_lo, w1 = sum_hi;
  if (static_cast<double>(sum_hi - sum_lo + 1) >
      static_cast<double>(opts.max_bins)) {
    std::vector<double> w, x;
    for (const auto& a : window_atoms) {
      if (a.weight > 0.0 && a.log_mag != -INFINITY) {
        w.push_back(a.weight);
        x.push_back(a.log_mag);
      }
    }
    const auto cw = detail::chernoff_window(w, x, static_cast<double>(m),
                                            opts.tail_eps);
    const double center = static_cast<double>(m) * cw.mean / full.alpha;
    const double margin = 4.0 + 1e-3 * std::sqrt(static_cast<double>(m));
    w0 = std::max(sum_lo, static_cast<std::int64_t>(std::floor(
                              center - cw.below / full.alpha - margin)));
    w1 = std::min(sum_hi, static_cast<std::int64_t>(std::ceil(
                              center + cw.above / full.alpha + margin)));
    out.tail_mass = 2.0 * opts.tail_eps;
    if (static_cast<double>(w1 - w0 + 1) >
        static_cast<double>(opts.max_bins)) {
      // Keep the central max_bins; the true tail outside is unknown here,
      // so report it as large.
      const std::int64_t mid = (w0 + w1) / 2;
      const auto half = static_cast<std::int64_t>(opts.max_bins / 2);
      w0 = mid - half;
      w1 = mid + half - 1;
      out.tail_mass = 1.0;
    }
  }
  const std::size_t window = static_cast<std::size_t>(w1 - w0 + 1);
  detail::RealFft fft(detail::fft_size_for(window));
  const std::size_t big_n = fft.size();

  if (sub && sub->size() > 0 &&
      (sub->first_bin < lo ||
       sub->first_bin + static_cast<std::int64_t>(sub->size()) > lo + n_in)) {
    throw std::logic_error("power_difference: sub grid outside full grid");
  }
  const auto big = static_cast<std::int64_t>(big_n);
  const auto wrap = [big](std::int64_t v) {
    return static_cast<std::size_t>((v % big + big) % big);
  };
  // The m-fold circular power with every draw rotated by `shift` bins;
  // the exact result is rotated by m * shift, the rounding is not.
  const auto power = [&](std::int64_t shift, std::vector<double>& plus,
                         std::vector<double>& minus) {
    const auto load = [&](const SignedLogDistribution& d, double sign) {
      std::vector<double> buf(big_n, 0.0);
      for (std::size_t i = 0; i < d.size(); ++i) {
        const std::int64_t bin = d.first_bin + static_cast<std::int64_t>(i);
        buf[wrap(bin - lo + shift)] += d.plus[i] + sign * d.minus[i];
      }
      return buf;
    };
    std::vector<std::complex<double>> spec[2];
    for (int s = 0; s < 2; ++s) {
      const double sign = s == 0 ? 1.0 : -1.0;
      auto a = fft.forward(load(full, sign));
      for (auto& z : a) z = detail::ipow(z, m);
      if (sub && sub->size() > 0) {
        const auto b = fft.forward(load(*sub, sign));
        for (std::size_t i = 0; i < a.size(); ++i) a[i] -= detail::ipow(b[i], m);
      }
      spec[s] = std::move(a);
    }
    const auto sum_part = fft.backward(spec[0]);   // plus + minus
    const auto diff_part = fft.backward(spec[1]);  // plus - minus
    plus.resize(window);
    minus.resize(window);
    const std::int64_t base =
        static_cast<std::int64_t>(m) * (lo - shift);
    for (std::size_t i = 0; i < window; ++i) {
      const std::size_t idx = wrap(w0 + static_cast<std::int64_t>(i) - base);
      plus[i] = 0.5 * (sum_part[idx] + diff_part[idx]);
      minus[i] = 0.5 * (sum_part[idx] - diff_part[idx]);
    }
  };
  out.first_bin = w0;
  power(0, out.plus, out.minus);
  if (opts.measure_noise) {
    std::vector<double> plus, minus;
    power(big / 3 + 1, plus, minus);
    double sq = 0.0;
    for (std::size_t i = 0; i < window; ++i) {
      sq += (plus[i] - out.plus[i]) * (plus[i] - out.plus[i]) +
            (minus[i] - out.minus[i]) * (minus[i] - out.minus[i]);
    }
    // Two independent roundings: their difference has twice the variance.
    out.noise = std::sqrt(sq / (4.0 * static_cast<double>(window)));
  }
  return out;
}

// Distribution of (product of signs, sum of log magnitudes) over m
// independent draws from `dist`.
inline SignedLogDistribution convolve_power(const SignedLogDistribution& dist,
                                            std::size_t m,
                                            const ConvolveOptions& opts = {}) {
  if (m == 1) return dist;
  // Window sizing from the binned masses themselves.
  std::vector<LogAtom> atoms;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double w = std::abs(dist.plus[i]) + std::abs(dist.minus[i]);
    if (w > 0.0) atoms.push_back({w, 1, dist.value(i)});
  }
  return power_difference(dist, nullptr, m, atoms, opts);
}

// Expectation of g over a distribution; g receives (sign, log magnitude),
// sign 0 for the magnitude-0 mass.
inline double expectation(const SignedLogDistribution& d,
                          const std::function<double(int, double)>& g) {
  double total = 0.0;
  if (d.zero_mass != 0.0) total += d.zero_mass * g(0, -INFINITY);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double v = d.value(i);
    if (d.plus[i] != 0.0) total += d.plus[i] * g(1, v);
    if (d.minus[i] != 0.0) total += d.minus[i] * g(-1, v);
  }
  return total;
}

struct LongRepOptions {
  double alpha0 = 1e-4;  // ladder base: grids are alpha0 * 2^j
  // Grid width of a magnitude level relative to its smallest magnitude.
  double relative_resolution = 1.0 / 1024.0;
  // Grid width used for the R part, before any coarsening to fit max_bins.
  double r_alpha = 1e-3;
  ConvolveOptions convolve{std::size_t{1} << 20, 1e-14};
  double unstable_tail = 1e-9;
  // Levels whose total mass is below this are skipped.
  double negligible_mass = 1e-18;
  // Largest accepted ratio of the measured roundoff in E[phi(Q)] + E[ln(1+R)]
  // to the larger of the two terms.  Near a threshold the two nearly cancel,
  // so once both sink toward the roundoff floor the root is noise.
  double noise_ratio = 1e-3;
};

struct LongRepEstimate {
  double s_rb = 0.0;  // bits
  bool stable = true;
  double tail_mass = 0.0;
  double noise = 0.0;        // roundoff bound on S_RB, nats
  double signal = 0.0;       // max(|E[phi(Q)]|, |E[ln(1+R)]|), nats
};

namespace detail {

inline double ladder_at_most(double alpha0, double target) {
  return alpha0 * std::exp2(std::floor(std::log2(target / alpha0)));
}

// Smallest ladder grid that keeps the m-fold support (or its Chernoff
// window) within max_bins.
inline double ladder_fit(double alpha0, double start, double width_value,
                         std::size_t max_bins) {
  double alpha = ladder_at_most(alpha0, start);
  while (width_value / alpha > 0.9 * static_cast<double>(max_bins)) {
    alpha *= 2.0;
  }
  return alpha;
}

}  // namespace detail

// E[g(sign Q, ln|Q|)] for Q the product of m independent draws of the
// signed atoms, computed level by level as described above.  g must be
// smooth away from log magnitude 0.
inline double signed_product_expectation(
    std::span<const LogAtom> atoms, std::size_t m,
    const std::function<double(int, double)>& g, const LongRepOptions& opts,
    double* tail_mass = nullptr, bool* stable = nullptr,
    double* noise = nullptr) {
  // Exact unit magnitudes, and the positive magnitudes sorted.
  double one_plus = 0.0, one_minus = 0.0;
  std::vector<LogAtom> rest;
  for (const auto& a : atoms) {
    if (a.weight <= 0.0 || a.log_mag == -INFINITY) continue;
    if (a.log_mag >= 0.0) {
      (a.sign >= 0 ? one_plus : one_minus) += a.weight;
    } else {
      rest.push_back(a);
    }
  }
  std::sort(rest.begin(), rest.end(), [](const LogAtom& a, const LogAtom& b) {
    return a.log_mag > b.log_mag;  // smallest magnitude first
  });
  const double dm = static_cast<double>(m);
  double total = 0.0;
  // Level 0: every draw has unit magnitude.
  {
    const double s = one_plus + one_minus, d = one_plus - one_minus;
    const double p_plus = 0.5 * (std::pow(s, dm) + std::pow(d, dm));
    const double p_minus = 0.5 * (std::pow(s, dm) - std::pow(d, dm));
    if (p_plus != 0.0) total += p_plus * g(1, 0.0);
    if (p_minus != 0.0) total += p_minus * g(-1, 0.0);
  }
  // Levels: maximal runs within a factor of two of their first magnitude.
  std::size_t start = 0;
  double cumulative = one_plus + one_minus;
  while (start < rest.size()) {
    const double d_min = -rest[start].log_mag;
    std::size_t end = start;
    while (end < rest.size() && -rest[end].log_mag <= 2.0 * d_min) ++end;
    double level_weight = 0.0;
    for (std::size_t i = start; i < end; ++i) level_weight += rest[i].weight;
    const double upto = cumulative + level_weight;
    const double level_mass = std::pow(upto, dm) - std::pow(cumulative, dm);
    if (std::abs(level_mass) > opts.negligible_mass) {
      std::vector<LogAtom> full_atoms, sub_atoms;
      if (one_plus > 0.0) full_atoms.push_back({one_plus, 1, 0.0});
      if (one_minus > 0.0) full_atoms.push_back({one_minus, -1, 0.0});
      for (std::size_t i = 0; i < start; ++i) full_atoms.push_back(rest[i]);
      sub_atoms = full_atoms;
      for (std::size_t i = start; i < end; ++i) full_atoms.push_back(rest[i]);
      const double d_max = -rest[end - 1].log_mag;
      const double alpha = detail::ladder_fit(
          opts.alpha0, opts.relative_resolution * d_min, dm * d_max,
          opts.convolve.max_bins);
      if (alpha > 0.25 * d_min && stable) *stable = false;
      const auto full = bin_atoms(full_atoms, alpha);
      const auto sub = bin_atoms(sub_atoms, alpha);
      const auto diff = power_difference(
          full, sub.size() ? &sub : nullptr, m, full_atoms, opts.convolve);
      if (tail_mass) *tail_mass += diff.tail_mass * std::abs(upto);
      // Mass of this level sits at log magnitude <= -d_min; bins above
      // that only hold binning residue, evaluated at -d_min / 2.
      const double cap = -0.5 * d_min;
      double part = 0.0, spread = 0.0;
      for (std::size_t i = 0; i < diff.size(); ++i) {
        const double v = std::min(diff.value(i), cap);
        const double gp = g(1, v), gm = g(-1, v);
        part += diff.plus[i] * gp + diff.minus[i] * gm;
        spread += std::abs(gp) + std::abs(gm);
      }
      total += part;
      if (noise) *noise += diff.noise * spread;
    }
    cumulative = upto;
    start = end;
  }
  return total;
}

// E[g(ln R)] for R the product of m independent positive draws; g must be
// smooth.  Draws with R = 0 contribute g(-inf) weighted by their mass.
inline double positive_product_expectation(
    std::span<const LogAtom> atoms, std::size_t m,
    const std::function<double(double)>& g, const LongRepOptions& opts,
    double* tail_mass = nullptr, bool* stable = nullptr,
    double* noise = nullptr) {
  double lo = INFINITY, hi = -INFINITY, zero = 0.0, nonzero = 0.0;
  std::vector<LogAtom> live;
  for (const auto& a : atoms) {
    if (a.weight <= 0.0) continue;
    if (a.log_mag == -INFINITY) {
      zero += a.weight;
      continue;
    }
    lo = std::min(lo, a.log_mag);
    hi = std::max(hi, a.log_mag);
    nonzero += a.weight;
    live.push_back({a.weight, 1, a.log_mag});
  }
  const double dm = static_cast<double>(m);
  double total = 0.0;
  const double p_all_nonzero = std::pow(nonzero, dm);
  const double p_some_zero = 1.0 - p_all_nonzero;
  if (p_some_zero > 0.0) total += p_some_zero * g(-INFINITY);
  if (live.empty()) return total;
  double width = dm * (hi - lo);
  if (width / opts.r_alpha > 0.9 * static_cast<double>(opts.convolve.max_bins)) {
    std::vector<double> w, x;
    for (const auto& a : live) {
      w.push_back(a.weight);
      x.push_back(a.log_mag);
    }
    const auto cw =
        detail::chernoff_window(w, x, dm, opts.convolve.tail_eps);
    width = std::min(width, cw.below + cw.above);
  }
  const double alpha =
      detail::ladder_fit(opts.alpha0, opts.r_alpha, width,
                         opts.convolve.max_bins);
  const auto kernel = bin_atoms(live, alpha);
  const auto power = power_difference(kernel, nullptr, m, live, opts.convolve);
  if (tail_mass) *tail_mass += power.tail_mass;
  if (stable && alpha > 16.0 * opts.r_alpha) *stable = false;
  double spread = 0.0;
  for (std::size_t i = 0; i < power.size(); ++i) {
    const double gv = g(power.value(i));
    total += power.plus[i] * gv;
    spread += std::abs(gv);
  }
  if (noise) *noise += power.noise * spread;
  return total;
}

// Signed atoms (sign q, ln|q|) of the block outcomes.
inline std::vector<LogAtom> q_atoms(std::size_t n, const PauliChannel& ch) {
  std::vector<LogAtom> atoms;
  for (const auto& c : qr_coefficients(n, ch)) {
    if (c.zero_weight || c.block_weight <= 0.0) continue;
    atoms.push_back({c.block_weight, c.q < 0.0 ? -1 : 1,
                     c.q == 0.0 ? -INFINITY : std::log(std::abs(c.q))});
  }
  return atoms;
}

inline std::vector<LogAtom> r_atoms(std::size_t n, const PauliChannel& ch) {
  std::vector<LogAtom> atoms;
  for (const auto& c : qr_coefficients(n, ch)) {
    if (c.zero_weight || c.block_weight <= 0.0) continue;
    atoms.push_back(
        {c.block_weight, 1, c.r == 0.0 ? -INFINITY : std::log(c.r)});
  }
  return atoms;
}

// Estimated S_RB (bits) of the n x m concatenated repetition code.
inline LongRepEstimate s_rb_estimate(std::size_t n, std::size_t m,
                                     const PauliChannel& ch,
                                     const LongRepOptions& opts = {}) {
  if (n == 0 || m == 0) throw std::invalid_argument("n and m must be >= 1");
  LongRepEstimate est;
  const auto phi = [](int sign, double log_mag) {
    if (sign == 0) return 0.0;
    if (sign > 0) {
      const double x = std::exp(log_mag);
      return -(1.0 + x) * std::log1p(x);
    }
    if (log_mag >= 0.0) return 0.0;
    const double one_minus = -std::expm1(log_mag);
    return -one_minus * std::log(one_minus);
  };
  const auto softplus = [](double log_r) { return detail::softplus(log_r); };
  const auto qa = q_atoms(n, ch);
  const auto ra = r_atoms(n, ch);
  const double eq = signed_product_expectation(
      qa, m, phi, opts, &est.tail_mass, &est.stable, &est.noise);
  const double er = positive_product_expectation(
      ra, m, softplus, opts, &est.tail_mass, &est.stable, &est.noise);
  if (est.tail_mass > opts.unstable_tail) est.stable = false;
  est.signal = std::max(std::abs(eq), std::abs(er));
  if (opts.convolve.measure_noise &&
      !(est.noise <= opts.noise_ratio * est.signal)) {
    est.stable = false;
  }
  est.s_rb = (std::log(2.0) + eq + er) / std::log(2.0);
  return est;
}

}  // namespace qcoset

#endif  // QCOSET_LONGREP_HPP_
