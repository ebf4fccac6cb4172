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

#include "qcoset/codes.hpp"

#include <random>
#include <stdexcept>
#include <string>

#include "gtest/gtest.h"
#include "qcoset/registry.hpp"

namespace qcoset {
namespace {

PauliString P(const char* s) { return PauliString::parse(s); }

constexpr const char* kFiveQubit = R"(name five
nk 5 1
G XZZXI
G IXZZX
G XIXZZ
G ZXIXZ
LX XXXXX
LZ ZZZZZ
)";

TEST(Codes, ParsesFiveQubitCode) {
  const auto code = parse_code(kFiveQubit);
  EXPECT_EQ(code.n, 5u);
  EXPECT_EQ(code.k, 1u);
  EXPECT_EQ(code.generators.size(), 4u);
  EXPECT_EQ(code.generators[0].str(), "XZZXI");
  EXPECT_FALSE(code.permutation_symmetric);
}

TEST(Codes, RejectsInconsistentInput) {
  // A single-qubit "code" whose only generator is Z cannot carry a logical.
  EXPECT_THROW(parse_code("name bad\nnk 1 1\nG Z\nLX X\nLZ Z\n"),
               std::invalid_argument);
  EXPECT_THROW(parse_code("name bad\nnk 2 1\nG XQ\nLX XX\nLZ ZI\n"),
               std::invalid_argument);
  EXPECT_THROW(parse_code("name bad\nnk 3 1\nG ZZ\nLX XXX\nLZ ZII\n"),
               std::invalid_argument);
  // Anticommuting generators.
  EXPECT_THROW(parse_code("name bad\nnk 3 1\nG ZZI\nG XIX\nLX XXX\nLZ ZII\n"),
               std::invalid_argument);
  // Logical that anticommutes with a generator.
  EXPECT_THROW(parse_code("name bad\nnk 3 1\nG ZZI\nG ZIZ\nLX XII\nLZ ZII\n"),
               std::invalid_argument);
  // Logical pair that commutes.
  EXPECT_THROW(parse_code("name bad\nnk 3 1\nG ZZI\nG ZIZ\nLX ZZZ\nLZ ZII\n"),
               std::invalid_argument);
  EXPECT_THROW(parse_code("name bad\nG ZZI\n"), std::invalid_argument);
  EXPECT_THROW(parse_code("name bad\nnk 3 1\nQ ZZI\n"), std::invalid_argument);
}

TEST(Codes, FourTwoTwo) {
  const auto code = registry_get("422");
  EXPECT_EQ(code.n, 4u);
  EXPECT_EQ(code.k, 2u);
  EXPECT_EQ(code.generators.size(), 2u);
}

TEST(Codes, RegistryTranscriptions) {
  const auto b9 = registry_get("biased9");
  EXPECT_EQ(b9.generators.size(), 8u);
  EXPECT_EQ(b9.generators[0].str(), "ZZIZIZIXY");

  const auto r5 = registry_get("repZ(5)");
  ASSERT_EQ(r5.generators.size(), 4u);
  EXPECT_EQ(r5.generators[0].str(), "ZZIII");
  EXPECT_EQ(r5.generators[1].str(), "ZIZII");
  EXPECT_EQ(r5.generators[2].str(), "ZIIZI");
  EXPECT_EQ(r5.generators[3].str(), "ZIIIZ");
  EXPECT_EQ(r5.logical_x[0].str(), "XXXXX");
  EXPECT_EQ(r5.logical_z[0].str(), "ZIIII");
  EXPECT_TRUE(r5.permutation_symmetric);

  EXPECT_THROW(registry_get("nosuchcode"), std::invalid_argument);
  EXPECT_THROW(registry_get("repY(3)"), std::invalid_argument);
  EXPECT_THROW(registry_get("rep(0)"), std::invalid_argument);
}

TEST(Codes, RegistryHasEveryPublishedCode) {
  for (const char* name :
       {"3repX", "3repZ", "4repZ", "5repZ", "7repX", "5qubit", "steane",
        "tailored713H", "613H", "cdSteaneH", "scfH", "shor", "11qubit",
        "13cyclic", "biased9", "biased13", "422", "toric822"}) {
    const auto code = registry_get(name);
    EXPECT_EQ(code.generators.size(), code.n - code.k) << name;
    EXPECT_FALSE(code.permutation_symmetric) << name;
  }
  EXPECT_EQ(registry_names().size(), 18u);
}

TEST(Codes, Classify) {
  const auto five = registry_get("5qubit");
  const auto id = classify(five, PauliString(5));
  for (auto s : id.syndrome) EXPECT_EQ(s, 0);
  for (auto l : id.logical) EXPECT_EQ(l, 0);

  const auto zl = classify(five, P("ZZZZZ"));
  for (auto s : zl.syndrome) EXPECT_EQ(s, 0);
  EXPECT_EQ(zl.logical[0], 1);  // anticommutes with the logical X
  EXPECT_EQ(zl.logical[1], 0);
  EXPECT_EQ(logical_letter(zl, 0), Pauli::Z);

  // XII in repZ(3) anticommutes with both ZZI and ZIZ, commutes with XXX and
  // anticommutes with ZII: it is a logical-X-class error with syndrome 11.
  const auto x = classify(registry_get("repZ(3)"), P("XII"));
  EXPECT_EQ(x.syndrome, (std::vector<std::uint8_t>{1, 1}));
  EXPECT_EQ(x.logical, (std::vector<std::uint8_t>{0, 1}));
  EXPECT_EQ(logical_letter(x, 0), Pauli::X);

  EXPECT_THROW(classify(five, P("XX")), std::invalid_argument);
}

// Invariance of the coset address under stabilizers, and the logical flip.
TEST(Codes, ClassifyRespectsCosetStructure) {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> letter(0, 3);
  for (const auto& name : registry_names()) {
    const auto code = registry_get(name);
    for (int t = 0; t < 10000; ++t) {
      PauliString e(code.n), s(code.n);
      for (std::size_t i = 0; i < code.n; ++i) {
        e.set(i, static_cast<Pauli>(letter(rng)));
      }
      for (const auto& g : code.generators) {
        if (coin(rng)) s *= g;
      }
      const auto base = classify(code, e);
      const auto moved = classify(code, e * s);
      ASSERT_EQ(base.syndrome, moved.syndrome) << name;
      ASSERT_EQ(base.logical, moved.logical) << name;
      if (t % 16 == 0) {
        for (std::size_t j = 0; j < code.k; ++j) {
          auto flipped = classify(code, e * code.logical_x[j]);
          EXPECT_EQ(flipped.syndrome, base.syndrome);
          for (std::size_t b = 0; b < 2 * code.k; ++b) {
            const bool expect_flip = b == 2 * j + 1;
            EXPECT_EQ(flipped.logical[b] != base.logical[b], expect_flip)
                << name << " bit " << b;
          }
        }
      }
    }
  }
}

TEST(Codes, SerializeRoundTrip) {
  for (const auto& name : registry_names()) {
    const auto code = registry_get(name);
    const auto text = serialize_code(code);
    const auto again = parse_code(text);
    EXPECT_EQ(serialize_code(again), text) << name;
    ASSERT_EQ(again.generators.size(), code.generators.size());
    for (std::size_t i = 0; i < code.generators.size(); ++i) {
      EXPECT_EQ(again.generators[i].str(), code.generators[i].str());
    }
  }
}

TEST(Codes, RegistryFilesAreVerbatimExceptRedundancy) {
  // Every stored generator string survives parsing unchanged; the one file
  // with a dependent generator keeps its first n - k independent members.
  for (const auto& name : registry_names()) {
    const auto code = registry_get(name);
    const std::string source(registry_source(name));
    for (const auto& g : code.generators) {
      EXPECT_NE(source.find("G " + g.str()), std::string::npos) << name;
    }
  }
}

TEST(Codes, SwapXzExchangesRepetitionTypes) {
  const auto swapped = swap_xz(registry_get("repZ(3)"));
  const auto x3 = registry_get("repX(3)");
  ASSERT_EQ(swapped.generators.size(), x3.generators.size());
  for (std::size_t i = 0; i < x3.generators.size(); ++i) {
    EXPECT_EQ(swapped.generators[i], x3.generators[i]);
  }
}

}  // namespace
}  // namespace qcoset
