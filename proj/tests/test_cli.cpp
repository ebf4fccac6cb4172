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

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "nlohmann/json.hpp"

namespace qcoset::cli {
namespace {

struct Result {
  int status = 0;
  std::string out;
  std::string err;
};

Result invoke(const RunConfig& cfg) {
  std::ostringstream out, err;
  Result r;
  r.status = run(cfg, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

RunConfig command(const char* name) {
  RunConfig cfg;
  cfg.command = name;
  cfg.threads = 1;
  return cfg;
}

bool contains(const std::string& s, const std::string& needle) {
  return s.find(needle) != std::string::npos;
}

TEST(Cli, ThresholdTable) {
  auto cfg = command("threshold");
  cfg.code = "5repZ";
  const auto r = invoke(cfg);
  EXPECT_EQ(r.status, kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "threshold 0.0634520293")) << r.out;
  EXPECT_TRUE(contains(r.out, "± 1e-10")) << r.out;
}

TEST(Cli, ThresholdJson) {
  auto cfg = command("threshold");
  cfg.code = "5qubit";
  cfg.format = Format::json;
  const auto r = invoke(cfg);
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["threshold"].get<double>(), 0.06298730942, 1e-8);
  EXPECT_TRUE(j["certified"].get<bool>());
  EXPECT_EQ(j["method"], "exact");
  EXPECT_TRUE(j["std_error"].is_null());
}

TEST(Cli, RateOfBareChannel) {
  auto cfg = command("rate");
  cfg.code = "";
  cfg.p = 0.0;
  const auto r = invoke(cfg);
  EXPECT_EQ(r.status, kExitOk) << r.err;
  EXPECT_EQ(r.out, "p,s_rb,rate,method,std_error\n0,0,1,exact,\n");
}

TEST(Cli, MonteCarloRateCarriesStandardError) {
  auto cfg = command("rate");
  cfg.code = "repZ(3) x repX(3)";
  cfg.p = 0.06;
  cfg.samples = 2000;
  cfg.seed = 4;
  const auto a = invoke(cfg);
  ASSERT_EQ(a.status, kExitOk) << a.err;
  EXPECT_TRUE(contains(a.out, ",mc,")) << a.out;
  EXPECT_FALSE(contains(a.out, ",mc,\n"));
  EXPECT_EQ(invoke(cfg).out, a.out);
}

TEST(Cli, SweepIsDeterministicCsv) {
  auto cfg = command("sweep");
  cfg.code = "repZ(5)";
  cfg.range = "0.06:0.065:6";
  const auto a = invoke(cfg);
  ASSERT_EQ(a.status, kExitOk) << a.err;
  cfg.threads = 2;
  EXPECT_EQ(invoke(cfg).out, a.out);
  std::istringstream lines(a.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  EXPECT_EQ(count, 7);
  EXPECT_TRUE(contains(a.out, "0.065,"));
}

TEST(Cli, SweepJsonHasSchemaKeys) {
  auto cfg = command("sweep");
  cfg.code = "steane";
  cfg.range = "0.05:0.06:3";
  cfg.format = Format::json;
  const auto r = invoke(cfg);
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 3u);
  for (const char* key : {"p", "s_rb", "rate", "method", "std_error"}) {
    EXPECT_TRUE(j[0].contains(key)) << key;
  }
}

TEST(Cli, CodesListAndShow) {
  auto cfg = command("codes");
  cfg.action = "list";
  cfg.format = Format::csv;
  auto r = invoke(cfg);
  ASSERT_EQ(r.status, kExitOk);
  EXPECT_TRUE(contains(r.out, "biased13,13,1"));
  EXPECT_TRUE(contains(r.out, "422,4,2"));

  cfg = command("codes");
  cfg.action = "show";
  cfg.code = "5qubit";
  r = invoke(cfg);
  ASSERT_EQ(r.status, kExitOk);
  EXPECT_TRUE(contains(r.out, "G XZZXI"));

  cfg.p = 0.05;
  r = invoke(cfg);
  ASSERT_EQ(r.status, kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["cosets"].size(), 16u);
  EXPECT_EQ(j["cosets"]["0x0"].size(), 4u);
}

TEST(Cli, TablesRunner) {
  auto cfg = command("tables");
  cfg.name = "table6";
  cfg.tol = 1e-8;
  const auto r = invoke(cfg);
  EXPECT_EQ(r.status, kExitOk) << r.out;
  EXPECT_TRUE(contains(r.out, "table6: 16/16 cells PASS")) << r.out;

  cfg.name = "list";
  const auto l = invoke(cfg);
  for (const char* t : {"table1", "table2", "table6", "table7", "table9",
                        "table10", "table11"}) {
    EXPECT_TRUE(contains(l.out, t)) << t;
  }
}

TEST(Cli, LongRepOuterRange) {
  auto cfg = command("longrep");
  cfg.inner = 3;
  cfg.outer_range = "5:7";
  const auto r = invoke(cfg);
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "inner,outer,threshold,stable\n3,5,"));
  EXPECT_TRUE(contains(r.out, "\n3,7,"));
}

TEST(Cli, OutputFile) {
  const auto path =
      (std::filesystem::temp_directory_path() / "qcoset_cli_test.csv").string();
  auto cfg = command("rate");
  cfg.code = "5qubit";
  cfg.p = 0.0;
  cfg.out = path;
  const auto r = invoke(cfg);
  ASSERT_EQ(r.status, kExitOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_TRUE(contains(buf.str(), "0,0,0.2,exact,"));
  std::remove(path.c_str());
}

TEST(Cli, ValidationErrorsExitTwo) {
  auto cfg = command("threshold");
  cfg.code = "nosuchcode";
  auto r = invoke(cfg);
  EXPECT_EQ(r.status, kExitUsage);
  EXPECT_TRUE(contains(r.err, "unknown code 'nosuchcode'"));
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);

  cfg.code = "5qubit";
  cfg.channel = "custom:0.5,0.5";
  EXPECT_EQ(invoke(cfg).status, kExitUsage);

  cfg = command("rate");
  cfg.code = "5qubit";
  cfg.p = 0.5;
  r = invoke(cfg);
  EXPECT_EQ(r.status, kExitUsage);
  EXPECT_TRUE(r.out.empty());
  cfg.p.reset();
  EXPECT_EQ(invoke(cfg).status, kExitUsage);

  cfg = command("sweep");
  cfg.code = "5qubit";
  cfg.range = "0.1:0.2";
  EXPECT_EQ(invoke(cfg).status, kExitUsage);

  cfg = command("tables");
  cfg.name = "table99";
  EXPECT_EQ(invoke(cfg).status, kExitUsage);

  EXPECT_EQ(invoke(command("frobnicate")).status, kExitUsage);
}

TEST(Cli, NumericalFailuresExitThree) {
  // Two 13-qubit layers exceed the exact assignment budget.
  auto cfg = command("rate");
  cfg.code = "biased13 x biased13";
  cfg.p = 0.05;
  const auto r = invoke(cfg);
  EXPECT_EQ(r.status, kExitNumerical);
  EXPECT_TRUE(contains(r.err, "Monte Carlo")) << r.err;
}

}  // namespace
}  // namespace qcoset::cli
