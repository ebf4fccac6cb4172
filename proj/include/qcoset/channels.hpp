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

// Single-qubit Pauli channels, the one-parameter families used throughout
// the threshold tables, Shannon entropy in bits, and hashing points.

#ifndef QCOSET_CHANNELS_HPP_
#define QCOSET_CHANNELS_HPP_

#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcoset/pauli.hpp"

namespace qcoset {

struct PauliChannel {
  double pi = 1.0;
  double px = 0.0;
  double py = 0.0;
  double pz = 0.0;

  double operator[](Pauli p) const {
    switch (p) {
      case Pauli::I:
        return pi;
      case Pauli::X:
        return px;
      case Pauli::Y:
        return py;
      case Pauli::Z:
        return pz;
    }
    return 0.0;
  }

  // Probabilities indexed by the symplectic code of the letter (I, X, Z, Y).
  std::array<double, 4> symplectic() const { return {pi, px, pz, py}; }

  double sum() const { return pi + px + py + pz; }

  friend bool operator==(const PauliChannel&, const PauliChannel&) = default;
};

inline void validate(const PauliChannel& ch, double tol = 1e-12) {
  if (!(ch.pi >= 0.0 && ch.px >= 0.0 && ch.py >= 0.0 && ch.pz >= 0.0)) {
    throw std::invalid_argument("Pauli channel has a negative component");
  }
  if (std::abs(ch.sum() - 1.0) > tol) {
    throw std::invalid_argument("Pauli channel components sum to " +
                                std::to_string(ch.sum()) + ", not 1");
  }
}

// Shannon entropy in bits, with 0 log 0 = 0.
inline double entropy_bits(const double* p, std::size_t count) {
  double h = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
  }
  return h;
}

inline double channel_entropy(const PauliChannel& ch) {
  const double p[4] = {ch.pi, ch.px, ch.py, ch.pz};
  return entropy_bits(p, 4);
}

enum class FamilyKind { depolarizing, independent_xz, two_pauli, custom };

// Coefficient sums further than this from 1 are rejected.  The bound is
// looser than machine precision because published optimized coefficients
// are printed to eight digits and do not always sum to exactly 1.
inline constexpr double kCustomSumTolerance = 1e-6;
inline constexpr double kCustomCoefficientFloor = 1e-4;

struct ChannelFamily {
  FamilyKind kind = FamilyKind::depolarizing;
  double cx = 0.0;  // Custom-family weights; unused for the fixed families.
  double cy = 0.0;
  double cz = 0.0;

  static ChannelFamily depolarizing() { return {FamilyKind::depolarizing}; }
  static ChannelFamily independent_xz() {
    return {FamilyKind::independent_xz};
  }
  static ChannelFamily two_pauli() { return {FamilyKind::two_pauli}; }

  static ChannelFamily custom(double cx, double cy, double cz) {
    for (double c : {cx, cy, cz}) {
      if (!(c >= kCustomCoefficientFloor && c <= 1.0)) {
        throw std::invalid_argument(
            "custom channel coefficients must lie in [0.0001, 1]");
      }
    }
    if (std::abs(cx + cy + cz - 1.0) > kCustomSumTolerance) {
      throw std::invalid_argument(
          "custom channel coefficients must sum to 1 (got " +
          std::to_string(cx + cy + cz) + ")");
    }
    return {FamilyKind::custom, cx, cy, cz};
  }

  // Largest admissible p.
  double upper_limit() const {
    switch (kind) {
      case FamilyKind::depolarizing:
        return 1.0 / 3.0;
      case FamilyKind::independent_xz:
      case FamilyKind::two_pauli:
        return 0.5;
      case FamilyKind::custom:
        return 1.0 / (cx + cy + cz);
    }
    return 0.0;
  }

  friend bool operator==(const ChannelFamily&, const ChannelFamily&) = default;
};

inline PauliChannel family_eval(const ChannelFamily& family, double p) {
  if (!(p >= 0.0 && p <= family.upper_limit())) {
    throw std::invalid_argument("noise parameter p = " + std::to_string(p) +
                                " outside the family's valid range [0, " +
                                std::to_string(family.upper_limit()) + "]");
  }
  switch (family.kind) {
    case FamilyKind::depolarizing:
      return {1.0 - 3.0 * p, p, p, p};
    case FamilyKind::independent_xz:
      return {(1.0 - p) * (1.0 - p), p * (1.0 - p), p * p, p * (1.0 - p)};
    case FamilyKind::two_pauli:
      return {1.0 - 2.0 * p, p, 0.0, p};
    case FamilyKind::custom: {
      // p_I is taken as the exact complement so the vector sums to one even
      // when the printed coefficients do not.
      const double px = family.cx * p, py = family.cy * p, pz = family.cz * p;
      return {std::max(0.0, 1.0 - (px + py + pz)), px, py, pz};
    }
  }
  return {};
}

inline double family_entropy(const ChannelFamily& family, double p) {
  return channel_entropy(family_eval(family, p));
}

namespace detail {

// Bisection for entropy(p) = 1 on [lo, hi] where entropy(lo) < 1 <
// entropy(hi).
inline double bisect_unit_entropy(const ChannelFamily& family, double lo,
                                  double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (family_entropy(family, mid) < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// The p at which the family's entropy first reaches one bit.  Entropy along
// every family is concave in p, so a family whose entropy at the upper limit
// falls short is bracketed at its maximum.  `hint` lets nested solves start
// from a nearby previous answer.
inline double hashing_point(const ChannelFamily& family,
                            std::optional<double> hint = std::nullopt,
                            double tol = 1e-12) {
  const double upper = family.upper_limit();
  double hi = upper;
  if (family_entropy(family, hi) < 1.0) {
    // Ternary search for the entropy maximum.
    double a = 0.0, b = upper;
    for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
      const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
      if (family_entropy(family, m1) < family_entropy(family, m2)) {
        a = m1;
      } else {
        b = m2;
      }
    }
    hi = 0.5 * (a + b);
    if (family_entropy(family, hi) < 1.0) {
      throw std::domain_error(
          "channel family never reaches one bit of entropy; no hashing point");
    }
  }
  double lo = 0.0;
  if (hint && *hint > 0.0 && *hint < hi) {
    // Expand a small bracket around the hint before falling back.
    double step = 1e-4;
    double a = std::max(0.0, *hint - step), b = std::min(hi, *hint + step);
    for (int it = 0; it < 60; ++it) {
      const bool a_ok = family_entropy(family, a) < 1.0;
      const bool b_ok = family_entropy(family, b) >= 1.0;
      if (a_ok && b_ok) {
        lo = a;
        hi = b;
        break;
      }
      step *= 2.0;
      if (!a_ok) a = std::max(0.0, *hint - step);
      if (!b_ok) b = std::min(hi, *hint + step);
    }
  }
  return detail::bisect_unit_entropy(family, lo, hi, tol);
}

// Channel specifiers: `depol`, `indxz`, `twopauli`, `custom:cX,cY,cZ`.
inline ChannelFamily parse_channel_spec(std::string_view spec) {
  if (spec == "depol") return ChannelFamily::depolarizing();
  if (spec == "indxz") return ChannelFamily::independent_xz();
  if (spec == "twopauli") return ChannelFamily::two_pauli();
  constexpr std::string_view kCustom = "custom:";
  if (spec.substr(0, kCustom.size()) == kCustom) {
    std::string_view rest = spec.substr(kCustom.size());
    double c[3];
    for (int i = 0; i < 3; ++i) {
      const auto comma = rest.find(',');
      if ((i < 2) != (comma != std::string_view::npos)) {
        throw std::invalid_argument(
            "custom channel needs exactly three comma-separated weights: " +
            std::string(spec));
      }
      const std::string_view field = rest.substr(0, comma);
      const auto [ptr, ec] =
          std::from_chars(field.data(), field.data() + field.size(), c[i]);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw std::invalid_argument("malformed custom channel weight '" +
                                    std::string(field) + "'");
      }
      if (comma != std::string_view::npos) rest = rest.substr(comma + 1);
    }
    return ChannelFamily::custom(c[0], c[1], c[2]);
  }
  throw std::invalid_argument("unknown channel '" + std::string(spec) +
                              "' (expected depol, indxz, twopauli or "
                              "custom:cX,cY,cZ)");
}

inline std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string to_spec(const ChannelFamily& family) {
  switch (family.kind) {
    case FamilyKind::depolarizing:
      return "depol";
    case FamilyKind::independent_xz:
      return "indxz";
    case FamilyKind::two_pauli:
      return "twopauli";
    case FamilyKind::custom:
      return "custom:" + format_shortest(family.cx) + "," +
             format_shortest(family.cy) + "," + format_shortest(family.cz);
  }
  return "";
}

}  // namespace qcoset

#endif  // QCOSET_CHANNELS_HPP_
