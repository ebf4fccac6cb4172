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

// Phaseless n-qubit Pauli operators in symplectic (x|z) form.
//
// Qubit i is the i-th character of the text form, so "XIZ" has X on qubit 0
// and Z on qubit 2.  Phases are discarded everywhere: the coset computations
// only ever need the group modulo phase.

#ifndef QCOSET_PAULI_HPP_
#define QCOSET_PAULI_HPP_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qcoset {

// Single-qubit Pauli letters, encoded by their symplectic bits: bit 0 is the
// x component and bit 1 is the z component.  XOR of two codes multiplies the
// letters modulo phase.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline constexpr Pauli operator*(Pauli a, Pauli b) {
  return static_cast<Pauli>(static_cast<std::uint8_t>(a) ^
                            static_cast<std::uint8_t>(b));
}

inline char to_char(Pauli p) {
  static constexpr char kLetters[4] = {'I', 'X', 'Z', 'Y'};
  return kLetters[static_cast<std::uint8_t>(p)];
}

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I':
      return Pauli::I;
    case 'X':
      return Pauli::X;
    case 'Y':
      return Pauli::Y;
    case 'Z':
      return Pauli::Z;
    default:
      throw std::invalid_argument(std::string("invalid Pauli letter '") + c +
                                  "'");
  }
}

// Letter counts of a Pauli string.
struct PauliWeights {
  std::size_t n = 0;
  std::size_t weight = 0;
  std::size_t i = 0;
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;
};

class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n)
      : n_(n), x_(num_words(n), 0), z_(num_words(n), 0) {}

  // Parses uppercase IXYZ text.  Throws std::invalid_argument on any other
  // character (lowercase included) or on empty input.
  static PauliString parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty Pauli string");
    PauliString p(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      p.set(i, pauli_from_char(text[i]));
    }
    return p;
  }

  std::size_t size() const { return n_; }

  bool x(std::size_t i) const { return (x_[i >> 6] >> (i & 63)) & 1u; }
  bool z(std::size_t i) const { return (z_[i >> 6] >> (i & 63)) & 1u; }

  Pauli operator[](std::size_t i) const {
    return static_cast<Pauli>(static_cast<unsigned>(x(i)) |
                              (static_cast<unsigned>(z(i)) << 1));
  }

  void set(std::size_t i, Pauli p) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    const auto code = static_cast<std::uint8_t>(p);
    if (code & 1u) {
      x_[i >> 6] |= mask;
    } else {
      x_[i >> 6] &= ~mask;
    }
    if (code & 2u) {
      z_[i >> 6] |= mask;
    } else {
      z_[i >> 6] &= ~mask;
    }
  }

  std::string str() const {
    std::string s(n_, 'I');
    for (std::size_t i = 0; i < n_; ++i) s[i] = to_char((*this)[i]);
    return s;
  }

  bool is_identity() const {
    for (std::size_t w = 0; w < x_.size(); ++w) {
      if (x_[w] | z_[w]) return false;
    }
    return true;
  }

  std::span<const std::uint64_t> x_words() const { return x_; }
  std::span<const std::uint64_t> z_words() const { return z_; }

  PauliString& operator*=(const PauliString& rhs) {
    require_same_size(rhs);
    for (std::size_t w = 0; w < x_.size(); ++w) {
      x_[w] ^= rhs.x_[w];
      z_[w] ^= rhs.z_[w];
    }
    return *this;
  }

  friend PauliString operator*(PauliString lhs, const PauliString& rhs) {
    lhs *= rhs;
    return lhs;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.n_ == b.n_ && a.x_ == b.x_ && a.z_ == b.z_;
  }

  void require_same_size(const PauliString& other) const {
    if (other.n_ != n_) {
      throw std::invalid_argument("Pauli length mismatch: " +
                                  std::to_string(n_) + " vs " +
                                  std::to_string(other.n_));
    }
  }

 private:
  static std::size_t num_words(std::size_t n) { return (n + 63) / 64; }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
};

// Symplectic inner product <a.x, b.z> + <a.z, b.x> mod 2: 0 when the two
// operators commute, 1 when they anticommute.
inline int symplectic_product(const PauliString& a, const PauliString& b) {
  a.require_same_size(b);
  const auto ax = a.x_words(), az = a.z_words();
  const auto bx = b.x_words(), bz = b.z_words();
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < ax.size(); ++w) {
    acc ^= (ax[w] & bz[w]) ^ (az[w] & bx[w]);
  }
  return std::popcount(acc) & 1;
}

inline bool commutes(const PauliString& a, const PauliString& b) {
  return symplectic_product(a, b) == 0;
}

inline PauliWeights weights(const PauliString& p) {
  PauliWeights w;
  w.n = p.size();
  for (std::size_t i = 0; i < p.size(); ++i) {
    switch (p[i]) {
      case Pauli::I:
        ++w.i;
        break;
      case Pauli::X:
        ++w.x;
        break;
      case Pauli::Y:
        ++w.y;
        break;
      case Pauli::Z:
        ++w.z;
        break;
    }
  }
  w.weight = w.x + w.y + w.z;
  return w;
}

// Tensor product a ⊗ b (a occupies the leading qubits).
inline PauliString tensor(const PauliString& a, const PauliString& b) {
  PauliString out(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.set(i, a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) out.set(a.size() + i, b[i]);
  return out;
}

}  // namespace qcoset

#endif  // QCOSET_PAULI_HPP_
