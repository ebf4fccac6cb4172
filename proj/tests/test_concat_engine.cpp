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

#include "qcoset/concat_engine.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "qcoset/capacity.hpp"
#include "qcoset/exact_engine.hpp"
#include "qcoset/registry.hpp"

namespace qcoset {
namespace {

PauliChannel depol(double p) {
  return family_eval(ChannelFamily::depolarizing(), p);
}

double flat_s_rb(const CodeStack& stack, const PauliChannel& ch) {
  return s_rb_exact(coset_distribution(compose_stack(stack), ch));
}

TEST(ConcatEngine, EffectiveChannelsOfThreeQubitRepetition) {
  const auto code = registry_get("repZ(3)");
  const std::vector<PauliChannel> sites(3, depol(0.05));
  const auto set = effective_channels(code, sites);
  ASSERT_EQ(set.entries.size(), 2u);
  double total = 0.0;
  for (const auto& e : set.entries) total += e.weight;
  EXPECT_NEAR(total, 1.0, 1e-15);

  const std::vector<PauliChannel> clean(3);
  const auto noiseless = effective_channels(code, clean);
  ASSERT_EQ(noiseless.entries.size(), 1u);
  EXPECT_EQ(noiseless.entries[0].weight, 1.0);
  EXPECT_EQ(noiseless.entries[0].ch, (PauliChannel{1, 0, 0, 0}));
}

TEST(ConcatEngine, UngroupedEntriesAreConditionalRows) {
  const auto code = registry_get("5qubit");
  const std::vector<PauliChannel> sites(5, depol(0.06));
  GroupingOptions off;
  off.enabled = false;
  const auto set = effective_channels(code, sites, off);
  const auto table = coset_distribution(code, sites);
  ASSERT_EQ(set.entries.size(), 16u);
  for (std::size_t t = 0; t < 16; ++t) {
    const auto row = table.row(t);
    const double pt = table.normalizer(t);
    EXPECT_NEAR(set.entries[t].weight, pt, 1e-15);
    EXPECT_NEAR(set.entries[t].ch.pi, row[0] / pt, 1e-12);
    EXPECT_NEAR(set.entries[t].ch.px, row[1] / pt, 1e-12);
    EXPECT_NEAR(set.entries[t].ch.pz, row[2] / pt, 1e-12);
    EXPECT_NEAR(set.entries[t].ch.py, row[3] / pt, 1e-12);
  }
  // The 15 nontrivial syndromes of the perfect code pool into one class.
  const auto grouped = effective_channels(code, sites);
  EXPECT_EQ(grouped.entries.size(), 2u);
}

TEST(ConcatEngine, GroupingNeverChangesValues) {
  StackOptions off;
  off.grouping.enabled = false;
  for (const char* spec : {"repZ(3) x repX(3)", "5qubit x repZ(3)",
                           "3repZ x 3repX x repZ(3)", "repX(3) x 422"}) {
    const auto stack = parse_stack(spec);
    const auto ch = depol(0.063);
    EXPECT_NEAR(s_rb_stack_exact(stack, ch), s_rb_stack_exact(stack, ch, off),
                1e-12)
        << spec;
  }
}

TEST(ConcatEngine, MatchesFlatComposedCode) {
  const auto ch = PauliChannel{0.9, 0.04, 0.025, 0.035};
  for (const char* spec :
       {"repZ(3) x repX(3)", "repX(2) x 5qubit", "5qubit x repX(2)",
        "3repZ x 422", "repZ(2) x repX(2) x repZ(3)", "repX(3) x repZ(4)"}) {
    const auto stack = parse_stack(spec);
    EXPECT_NEAR(s_rb_stack_exact(stack, ch), flat_s_rb(stack, ch), 1e-9)
        << spec;
  }
}

TEST(ConcatEngine, ComposedCodesAreValid) {
  const auto stack = parse_stack("repZ(3) x 5qubit");
  const auto code = compose_stack(stack);
  EXPECT_EQ(code.n, 15u);
  EXPECT_EQ(code.generators.size(), 14u);
  EXPECT_NO_THROW(validate(code));
}

TEST(ConcatEngine, StackGrammar) {
  const auto stack = parse_stack(" 5repX x 5qubit x 5repZ ");
  ASSERT_EQ(stack.layers.size(), 3u);
  EXPECT_EQ(stack.layers[0].name, "repX(5)");
  EXPECT_EQ(stack.layers[1].name, "5qubit");
  // "5repZ" is a registry transcription; "5repX" is generated.
  EXPECT_EQ(stack.layers[2].name, "5repZ");
  EXPECT_EQ(stack.length(), 125u);
  EXPECT_TRUE(parse_stack("").layers.empty());
  EXPECT_THROW(parse_stack("5qubit x nosuch"), std::invalid_argument);
  EXPECT_THROW(validate(parse_stack("422 x 5qubit")), std::invalid_argument);
}

TEST(ConcatEngine, EmptyStackIsTheBareChannel) {
  const auto ch = depol(0.05);
  EXPECT_DOUBLE_EQ(s_rb_stack_exact(CodeStack{}, ch), channel_entropy(ch));
  const auto point =
      rate(stack_model(CodeStack{}), ChannelFamily::depolarizing(), 0.05);
  EXPECT_DOUBLE_EQ(point.rate, 1.0 - channel_entropy(ch));
}

TEST(ConcatEngine, PrintedConcatenatedThreshold) {
  const auto res = threshold(stack_model(parse_stack("repZ(5) x repX(5)")),
                             ChannelFamily::depolarizing());
  EXPECT_NEAR(res.threshold, 0.06352047429, 1e-8);
}

TEST(ConcatEngine, BudgetIsEnforced) {
  StackOptions tight;
  tight.max_assignments = 10;
  EXPECT_THROW(
      s_rb_stack_exact(parse_stack("5qubit x biased9"), depol(0.06), tight),
      BudgetExceeded);
}

TEST(ConcatEngine, MonteCarloAgreesWithExact) {
  const auto stack = parse_stack("repZ(3) x repX(3)");
  const auto ch = depol(0.06);
  const double exact = s_rb_stack_exact(stack, ch);
  StackOptions opts;
  opts.threads = 1;
  const auto est = s_rb_stack_mc(stack, ch, 100000, 17, opts);
  EXPECT_GT(est.std_error, 0.0);
  EXPECT_LT(std::abs(est.mean - exact), 3.0 * est.std_error);

  const auto again = s_rb_stack_mc(stack, ch, 100000, 17, opts);
  EXPECT_EQ(est.mean, again.mean);
  EXPECT_EQ(est.std_error, again.std_error);
  opts.threads = 3;
  const auto threaded = s_rb_stack_mc(stack, ch, 100000, 17, opts);
  EXPECT_EQ(est.mean, threaded.mean);
}

TEST(ConcatEngine, MonteCarloErrorShrinksWithSamples) {
  const auto stack = parse_stack("5qubit x repZ(3)");
  const auto ch = depol(0.063);
  StackOptions opts;
  opts.mc_exact_budget = 0;  // force sampling of the inner layer
  const auto a = s_rb_stack_mc(stack, ch, 20000, 3, opts);
  const auto b = s_rb_stack_mc(stack, ch, 40000, 3, opts);
  EXPECT_NEAR(b.std_error / a.std_error, 1.0 / std::sqrt(2.0), 0.1);
  const double exact = s_rb_stack_exact(stack, ch);
  EXPECT_LT(std::abs(b.mean - exact), 4.0 * b.std_error);
}

TEST(ConcatEngine, MonteCarloNoiseless) {
  const auto est = s_rb_stack_mc(parse_stack("repX(5) x 5qubit x repZ(5)"),
                                 PauliChannel{}, 1000, 1);
  EXPECT_EQ(est.mean, 0.0);
  EXPECT_EQ(est.std_error, 0.0);
}

}  // namespace
}  // namespace qcoset
