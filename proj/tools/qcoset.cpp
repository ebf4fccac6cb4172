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

// qcoset: coherent-information rates, thresholds and channel optimization
// for stabilizer codes and their concatenations over Pauli channels.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cli.hpp"

namespace {

constexpr const char* kStackHelp =
    "Stacks are written \"A x B\" with layers joined by ' x ', innermost "
    "first: A x B encodes with B first, so A is the code applied directly "
    "to the channel.  Layers are registry names (see `codes list`), "
    "generated repetition codes repZ(n) / repX(n) / <n>repZ / <n>repX, or "
    "paths to .code files.  The empty string is no encoding.";

constexpr const char* kChannelHelp =
    "Channel family: depol (1-3p,p,p,p), indxz ((1-p)^2,p(1-p),p^2,p(1-p)), "
    "twopauli (1-2p,p,0,p), or custom:cX,cY,cZ for (1-p,cX p,cY p,cZ p).";

}  // namespace

int main(int argc, char** argv) {
  using qcoset::cli::RunConfig;
  RunConfig cfg;
  std::string format;
  std::optional<double> p, tol;

  CLI::App app{
      "qcoset: rates, thresholds and channel optimization for stabilizer "
      "codes over Pauli channels"};
  app.footer(std::string(kStackHelp) +
             "\n\nThe default worker count comes from QCOSET_THREADS, else "
             "the hardware.\nExit status: 0 success, 2 invalid input, 3 "
             "numerical failure (no bracket, instability, budget).");
  app.require_subcommand(1);

  const auto add_common = [&](CLI::App* sub, bool with_code) {
    if (with_code) sub->add_option("--code", cfg.code, kStackHelp);
    sub->add_option("--channel", cfg.channel, kChannelHelp)
        ->capture_default_str();
    sub->add_option("--format", format, "Output format: csv, json or table");
    sub->add_option("--threads", cfg.threads, "Worker cap (0 = default)");
    sub->add_option("--out", cfg.out, "Write output to this file");
  };

  auto* codes = app.add_subcommand("codes", "List or show registry codes");
  codes->add_option("action", cfg.action, "list | show")->required();
  add_common(codes, true);
  codes->add_option("--p", p,
                    "With show: dump the coset table at this p as JSON");

  auto* rate = app.add_subcommand("rate", "Rate (k - S_RB)/l at one p");
  add_common(rate, true);
  rate->add_option("--p", p, "Noise parameter")->required();
  rate->add_option("--samples", cfg.samples,
                   "Monte Carlo samples (0 = exact evaluation)");
  rate->add_option("--seed", cfg.seed, "Monte Carlo seed");

  auto* thr = app.add_subcommand("threshold", "Largest p with positive rate");
  add_common(thr, true);
  thr->add_option("--tol", tol, "Bracket width (default 1e-10)");
  thr->add_option("--samples", cfg.samples,
                  "Monte Carlo samples (0 = exact evaluation)");
  thr->add_option("--seed", cfg.seed, "Monte Carlo seed");

  auto* sw = app.add_subcommand("sweep", "Rates over a range of p (CSV rows)");
  add_common(sw, true);
  sw->add_option("--range", cfg.range, "a:b:steps")->required();
  sw->add_option("--samples", cfg.samples,
                 "Monte Carlo samples (0 = exact evaluation)");
  sw->add_option("--seed", cfg.seed, "Monte Carlo seed");

  auto* lr = app.add_subcommand(
      "longrep",
      "Long n x m concatenated repetition codes via the log-domain FFT "
      "estimator: a threshold by default, rates with --p or --range, or "
      "thresholds against m with --outer-range");
  add_common(lr, false);
  lr->add_option("--inner", cfg.inner, "Inner block length n")->required();
  lr->add_option("--outer", cfg.outer, "Outer length m");
  lr->add_option("--outer-range", cfg.outer_range, "first:last[:stride]");
  lr->add_option("--p", p, "Noise parameter");
  lr->add_option("--range", cfg.range, "a:b:steps");
  lr->add_option("--tol", tol, "Threshold bracket width");

  auto* opt = app.add_subcommand(
      "optimize",
      "Search custom channels for the largest rate at their hashing point");
  add_common(opt, true);
  opt->add_option("--restarts", cfg.restarts, "Nelder-Mead restarts")
      ->capture_default_str();
  opt->add_option("--seed", cfg.seed, "Quasi-random start offset");

  auto* tables = app.add_subcommand(
      "tables", "Re-run bundled regression tables against published values");
  tables->add_option("--name", cfg.name,
                     "table1, table2, table6, table7, table9, table10, "
                     "table11, all, or list");
  tables->add_option("--tol", tol, "Comparison tolerance (default per row)");
  tables->add_option("--threads", cfg.threads, "Worker cap (0 = default)");
  tables->add_option("--out", cfg.out, "Write output to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qcoset::cli::kExitUsage;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  cfg.p = p;
  cfg.tol = tol;
  try {
    if (!format.empty()) cfg.format = qcoset::cli::parse_format(format);
  } catch (const std::exception& e) {
    std::cerr << "qcoset: " << e.what() << '\n';
    return qcoset::cli::kExitUsage;
  }
  return qcoset::cli::run(cfg);
}
