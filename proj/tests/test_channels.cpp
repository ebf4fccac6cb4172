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

#include "qcoset/channels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace qcoset {
namespace {

TEST(Channels, FamilyEvaluation) {
  EXPECT_EQ(family_eval(ChannelFamily::depolarizing(), 0.0),
            (PauliChannel{1, 0, 0, 0}));
  const auto half = family_eval(ChannelFamily::independent_xz(), 0.5);
  EXPECT_DOUBLE_EQ(half.pi, 0.25);
  EXPECT_DOUBLE_EQ(half.px, 0.25);
  EXPECT_DOUBLE_EQ(half.py, 0.25);
  EXPECT_DOUBLE_EQ(half.pz, 0.25);
  const auto two = family_eval(ChannelFamily::two_pauli(), 0.1);
  EXPECT_DOUBLE_EQ(two.pi, 0.8);
  EXPECT_DOUBLE_EQ(two.px, 0.1);
  EXPECT_DOUBLE_EQ(two.py, 0.0);
  EXPECT_DOUBLE_EQ(two.pz, 0.1);
  const auto c = family_eval(ChannelFamily::custom(0.2, 0.3, 0.5), 0.1);
  EXPECT_DOUBLE_EQ(c.pi, 0.9);
  EXPECT_DOUBLE_EQ(c.px, 0.02);
  EXPECT_DOUBLE_EQ(c.py, 0.03);
  EXPECT_DOUBLE_EQ(c.pz, 0.05);
}

TEST(Channels, RejectsOutOfRangeParameters) {
  EXPECT_THROW(family_eval(ChannelFamily::depolarizing(), 0.34),
               std::invalid_argument);
  EXPECT_THROW(family_eval(ChannelFamily::two_pauli(), -0.01),
               std::invalid_argument);
  EXPECT_THROW(ChannelFamily::custom(0.5, 0.5, 0.5), std::invalid_argument);
  EXPECT_THROW(ChannelFamily::custom(0.99995, 0.00005, 0.0),
               std::invalid_argument);
}

TEST(Channels, Entropy) {
  EXPECT_EQ(channel_entropy({1, 0, 0, 0}), 0.0);
  EXPECT_NEAR(channel_entropy({0.25, 0.25, 0.25, 0.25}), 2.0, 1e-15);
  // The printed depolarizing hashing point, to its printed precision.
  EXPECT_NEAR(channel_entropy(family_eval(ChannelFamily::depolarizing(),
                                          0.0630965616)),
              1.0, 1e-6);
}

TEST(Channels, EntropyIsPermutationInvariant) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const auto ch = testing::random_channel(rng);
    std::array<double, 3> e{ch.px, ch.py, ch.pz};
    std::sort(e.begin(), e.end());
    const double h = channel_entropy(ch);
    do {
      EXPECT_NEAR(channel_entropy({ch.pi, e[0], e[1], e[2]}), h, 1e-14);
    } while (std::next_permutation(e.begin(), e.end()));
  }
}

TEST(Channels, HashingPoints) {
  EXPECT_NEAR(hashing_point(ChannelFamily::independent_xz()), 0.1100278644,
              1e-9);
  // The printed coefficients carry eight digits, which moves the root by a
  // few parts in 1e8.
  EXPECT_NEAR(hashing_point(ChannelFamily::custom(0.06609142, 0.91039291,
                                                  0.02351567)),
              0.2810011867, 1e-7);
  // The depolarizing root to twelve digits (the printed 0.0630965616 differs
  // in its eighth digit; see the README).
  EXPECT_NEAR(hashing_point(ChannelFamily::depolarizing()), 0.06309654164,
              1e-11);
}

// Independent fine-grid scan: the first grid point whose entropy reaches 1.
TEST(Channels, HashingPointAgreesWithGridScan) {
  for (const auto& family :
       {ChannelFamily::depolarizing(), ChannelFamily::independent_xz(),
        ChannelFamily::two_pauli()}) {
    const double root = hashing_point(family);
    const double step = 1e-7;
    // Scan a window around a coarse estimate to keep the test fast.
    double start = 0.0;
    for (double p = 0.0; p < family.upper_limit(); p += 1e-3) {
      if (channel_entropy(family_eval(family, p)) >= 1.0) break;
      start = p;
    }
    double first = -1.0;
    for (long i = 0;; ++i) {
      const double p = start + step * static_cast<double>(i);
      if (channel_entropy(family_eval(family, p)) >= 1.0) {
        first = p;
        break;
      }
    }
    EXPECT_LE(std::abs(first - root), step) << to_spec(family);
    EXPECT_NEAR(family_entropy(family, root), 1.0, 1e-10);
  }
}

TEST(Channels, HashingPointHintDoesNotChangeRoot) {
  const auto f = ChannelFamily::custom(0.2, 0.3, 0.5);
  EXPECT_NEAR(hashing_point(f, 0.15), hashing_point(f), 1e-12);
  EXPECT_NEAR(hashing_point(f, 0.9), hashing_point(f), 1e-12);
}

TEST(Channels, SpecRoundTrip) {
  for (const char* spec : {"depol", "indxz", "twopauli", "custom:0.2,0.3,0.5"}) {
    EXPECT_EQ(to_spec(parse_channel_spec(spec)), spec);
  }
  EXPECT_THROW(parse_channel_spec("bogus"), std::invalid_argument);
  EXPECT_THROW(parse_channel_spec("custom:0.2,0.3"), std::invalid_argument);
}

}  // namespace
}  // namespace qcoset
