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

// Command implementations for the qcoset tool, separated from argument
// parsing so tests can drive them directly.

#ifndef QCOSET_TOOLS_CLI_HPP_
#define QCOSET_TOOLS_CLI_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcoset/capacity.hpp"
#include "qcoset/channels.hpp"
#include "qcoset/codes.hpp"
#include "qcoset/concat_engine.hpp"
#include "qcoset/exact_engine.hpp"
#include "qcoset/longrep.hpp"
#include "qcoset/optimizer.hpp"
#include "qcoset/registry.hpp"
#include "qcoset/tables.hpp"

namespace qcoset::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

enum class Format { csv, json, table };

struct RunConfig {
  std::string command;  // codes, rate, threshold, sweep, longrep, optimize, tables
  std::string action;   // codes: list | show
  std::string code;
  std::string channel = "depol";
  std::optional<double> p;
  std::optional<double> tol;
  std::size_t samples = 0;  // > 0 selects Monte Carlo for stacks
  std::uint64_t seed = 1;
  std::size_t inner = 0;
  std::size_t outer = 0;
  std::string range;        // a:b:steps
  std::string outer_range;  // longrep: m_first:m_last[:stride]
  std::optional<Format> format;
  unsigned threads = 0;
  std::string out;
  std::string name;  // tables
  std::size_t restarts = 12;
};

// Thrown for malformed input; maps to exit status 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a computation cannot produce a trustworthy number; maps to
// exit status 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  if (s == "table") return Format::table;
  throw UsageError("--format must be csv, json or table (got '" + s + "')");
}

struct SweepRange {
  double a = 0.0;
  double b = 0.0;
  std::size_t steps = 0;
};

namespace detail {

inline double to_double(const std::string& s, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError(std::string(what) + ": '" + s + "' is not a number");
  }
  return v;
}

inline std::size_t to_count(const std::string& s, const char* what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError(std::string(what) + ": '" + s + "' is not a count");
  }
  return v;
}

inline std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> parts(1);
  for (char c : s) {
    if (c == ':') {
      parts.emplace_back();
    } else {
      parts.back() += c;
    }
  }
  return parts;
}

inline std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace detail

inline SweepRange parse_range(const std::string& s) {
  const auto parts = detail::split_colon(s);
  if (parts.size() != 3) {
    throw UsageError("--range must look like a:b:steps (got '" + s + "')");
  }
  SweepRange r{detail::to_double(parts[0], "--range start"),
               detail::to_double(parts[1], "--range end"),
               detail::to_count(parts[2], "--range steps")};
  if (r.steps < 2) throw UsageError("--range needs at least 2 steps");
  if (!(r.a <= r.b)) throw UsageError("--range needs a <= b");
  return r;
}

// Output sink: stdout or the --out file, flushed after every row.
class Sink {
 public:
  explicit Sink(const std::string& path, std::ostream& fallback)
      : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open --out file " + path);
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }
  void line(const std::string& s) { *out_ << s << '\n' << std::flush; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

// Row writer for rate-like rows in the three formats.
class RowWriter {
 public:
  RowWriter(Sink& sink, Format format, bool with_stable)
      : sink_(sink), format_(format), with_stable_(with_stable) {}

  void header() {
    if (format_ == Format::csv) {
      sink_.line(std::string("p,s_rb,rate,method,std_error") +
                 (with_stable_ ? ",stable" : ""));
    } else if (format_ == Format::json) {
      sink_.line("[");
    } else {
      std::ostringstream os;
      os << std::left << std::setw(16) << "p" << std::setw(22) << "s_rb"
         << std::setw(22) << "rate" << std::setw(9) << "method"
         << "std_error" << (with_stable_ ? "  stable" : "");
      sink_.line(os.str());
    }
  }

  void row(const RatePoint& r) {
    const bool exact = r.method != Method::mc;
    if (format_ == Format::csv) {
      std::string s = format_shortest(r.p) + "," + format_shortest(r.s_rb) +
                      "," + format_shortest(r.rate) + "," + to_string(r.method) +
                      "," + (exact ? "" : format_shortest(r.std_error));
      if (with_stable_) s += r.stable ? ",1" : ",0";
      sink_.line(s);
    } else if (format_ == Format::json) {
      nlohmann::ordered_json j;
      j["p"] = r.p;
      j["s_rb"] = r.s_rb;
      j["rate"] = r.rate;
      j["method"] = to_string(r.method);
      j["std_error"] = exact ? nlohmann::ordered_json() : nlohmann::ordered_json(r.std_error);
      if (with_stable_) j["stable"] = r.stable;
      sink_.line(std::string(rows_ ? "," : " ") + j.dump());
    } else {
      std::ostringstream os;
      os << std::left << std::setw(16) << format_shortest(r.p) << std::setw(22)
         << detail::fixed(r.s_rb, 15) << std::setw(22)
         << detail::fixed(r.rate, 15) << std::setw(9) << to_string(r.method)
         << (exact ? "-" : format_shortest(r.std_error))
         << (with_stable_ ? (r.stable ? "  yes" : "  NO") : "");
      sink_.line(os.str());
    }
    ++rows_;
  }

  void footer() {
    if (format_ == Format::json) sink_.line("]");
  }

 private:
  Sink& sink_;
  Format format_;
  bool with_stable_;
  std::size_t rows_ = 0;
};

inline CodeStack stack_from(const RunConfig& cfg) {
  CodeStack stack = parse_stack(cfg.code);
  if (cfg.samples > 0) {
    stack.strategy = Strategy::monte_carlo;
    stack.samples = cfg.samples;
    stack.seed = cfg.seed;
  }
  return stack;
}

inline StackOptions stack_options(const RunConfig& cfg) {
  StackOptions opts;
  opts.threads = cfg.threads;
  return opts;
}

inline nlohmann::ordered_json coset_table_json(const CosetTable& table) {
  nlohmann::ordered_json j;
  j["code"] = table.code_name;
  j["n"] = table.n;
  j["k"] = table.k;
  nlohmann::ordered_json rows = nlohmann::ordered_json::object();
  for (std::size_t t = 0; t < table.syndromes(); ++t) {
    std::ostringstream key;
    key << "0x" << std::hex << t;
    const auto row = table.row(t);
    rows[key.str()] = std::vector<double>(row.begin(), row.end());
  }
  j["cosets"] = std::move(rows);
  return j;
}

inline int cmd_codes(const RunConfig& cfg, Sink& sink) {
  const Format format = cfg.format.value_or(Format::table);
  if (cfg.action == "list") {
    if (format == Format::json) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& name : registry_names()) {
        const auto code = registry_get(name);
        arr.push_back({{"name", name}, {"n", code.n}, {"k", code.k}});
      }
      sink.line(arr.dump(2));
      return kExitOk;
    }
    if (format == Format::csv) sink.line("name,n,k");
    for (const auto& name : registry_names()) {
      const auto code = registry_get(name);
      if (format == Format::csv) {
        sink.line(name + "," + std::to_string(code.n) + "," +
                  std::to_string(code.k));
      } else {
        std::ostringstream os;
        os << std::left << std::setw(14) << name << "[[" << code.n << ","
           << code.k << "]]";
        sink.line(os.str());
      }
    }
    sink.line(format == Format::csv
                  ? "# repZ(n), repX(n), <n>repZ, <n>repX are generated on demand"
                  : "(plus generated repetition codes: repZ(n), repX(n), "
                    "<n>repZ, <n>repX)");
    return kExitOk;
  }
  if (cfg.action == "show") {
    if (cfg.code.empty()) throw UsageError("codes show needs --code");
    const StabilizerCode code = load_code(cfg.code);
    if (cfg.p) {
      const auto family = parse_channel_spec(cfg.channel);
      const auto table = coset_distribution(code, family_eval(family, *cfg.p));
      sink.line(coset_table_json(table).dump(2));
      return kExitOk;
    }
    sink.stream() << serialize_code(code) << std::flush;
    return kExitOk;
  }
  throw UsageError("codes needs an action: list or show");
}

inline int cmd_rate(const RunConfig& cfg, Sink& sink) {
  if (!cfg.p) throw UsageError("rate needs --p");
  const auto family = parse_channel_spec(cfg.channel);
  const auto model = stack_model(stack_from(cfg), stack_options(cfg));
  const RatePoint point = rate(model, family, *cfg.p);
  RowWriter w(sink, cfg.format.value_or(Format::csv), false);
  w.header();
  w.row(point);
  w.footer();
  return kExitOk;
}

inline int emit_threshold(const RunConfig& cfg, Sink& sink,
                          const ThresholdResult& res, double requested_tol) {
  const Format format = cfg.format.value_or(Format::table);
  const bool mc = res.method == Method::mc;
  const bool ok = res.bracketed && res.stable;
  if (format == Format::csv) {
    sink.line("stack,channel,threshold,tolerance,method,std_error,certified");
    sink.line("\"" + res.description + "\"," + to_spec(res.family) + "," +
              format_shortest(res.threshold) + "," +
              format_shortest(res.tolerance) + "," + to_string(res.method) +
              "," + (mc ? format_shortest(res.std_error) : "") + "," +
              (ok && !mc ? "1" : "0"));
  } else if (format == Format::json) {
    nlohmann::ordered_json j;
    j["stack"] = res.description;
    j["channel"] = to_spec(res.family);
    j["threshold"] = res.threshold;
    j["bracket"] = {res.bracket_lo, res.bracket_hi};
    j["tolerance"] = res.tolerance;
    j["method"] = to_string(res.method);
    j["std_error"] = mc ? nlohmann::ordered_json(res.std_error)
                        : nlohmann::ordered_json();
    j["certified"] = ok && !mc;
    j["stable"] = res.stable;
    j["evaluations"] = res.evaluations;
    if (!res.message.empty()) j["message"] = res.message;
    sink.line(j.dump(2));
  } else {
    std::ostringstream os;
    os << (res.description.empty() ? "(no encoding)" : res.description) << "  "
       << to_spec(res.family) << "  threshold " << detail::fixed(res.threshold, 12);
    if (mc) {
      os << " (Monte Carlo, standard error " << format_shortest(res.std_error)
         << ")";
    } else {
      // The solver often closes the bracket far below the requested width;
      // the claim printed is the requested one.
      os << " ± " << format_shortest(std::max(res.tolerance, requested_tol))
         << " ("
         << to_string(res.method) << (ok ? ", certified bracket" : "") << ")";
    }
    if (!res.stable) os << " [estimator unstable]";
    sink.line(os.str());
  }
  if (!res.bracketed) {
    throw NumericalError(res.message.empty() ? "no threshold bracket"
                                             : res.message);
  }
  if (!res.stable) throw NumericalError("estimator flagged instability");
  return kExitOk;
}

inline ThresholdOptions threshold_options(const RunConfig& cfg) {
  ThresholdOptions t;
  if (cfg.tol) {
    if (!(*cfg.tol > 0.0)) throw UsageError("--tol must be positive");
    t.tol = *cfg.tol;
    t.mc_tol = std::max(*cfg.tol, 1e-9);
  }
  return t;
}

inline int cmd_threshold(const RunConfig& cfg, Sink& sink) {
  const auto family = parse_channel_spec(cfg.channel);
  const auto model = stack_model(stack_from(cfg), stack_options(cfg));
  const auto topts = threshold_options(cfg);
  return emit_threshold(cfg, sink, threshold(model, family, topts),
                        topts.tol);
}

inline int cmd_sweep(const RunConfig& cfg, Sink& sink) {
  if (cfg.range.empty()) throw UsageError("sweep needs --range a:b:steps");
  const auto r = parse_range(cfg.range);
  const auto family = parse_channel_spec(cfg.channel);
  const auto model = stack_model(stack_from(cfg), stack_options(cfg));
  RowWriter w(sink, cfg.format.value_or(Format::csv), false);
  w.header();
  sweep(model, family, r.a, r.b, r.steps, cfg.threads,
        [&](const RatePoint& row) { w.row(row); });
  w.footer();
  return kExitOk;
}

inline int cmd_longrep(const RunConfig& cfg, Sink& sink) {
  if (cfg.inner == 0) throw UsageError("longrep needs --inner n");
  const auto family = parse_channel_spec(cfg.channel);
  if (!cfg.outer_range.empty()) {
    // Threshold against outer length: the Figure-style sweep.
    const auto parts = detail::split_colon(cfg.outer_range);
    if (parts.size() < 2 || parts.size() > 3) {
      throw UsageError("--outer-range must look like first:last[:stride]");
    }
    const std::size_t first = detail::to_count(parts[0], "--outer-range");
    const std::size_t last = detail::to_count(parts[1], "--outer-range");
    const std::size_t stride =
        parts.size() == 3 ? detail::to_count(parts[2], "--outer-range") : 1;
    if (first == 0 || last < first || stride == 0) {
      throw UsageError("--outer-range needs 1 <= first <= last, stride >= 1");
    }
    const Format format = cfg.format.value_or(Format::csv);
    if (format == Format::csv) sink.line("inner,outer,threshold,stable");
    if (format == Format::json) sink.line("[");
    bool all_stable = true;
    for (std::size_t m = first; m <= last; m += stride) {
      const auto res = threshold(longrep_model(cfg.inner, m), family,
                                 threshold_options(cfg));
      const bool ok = res.bracketed && res.stable;
      all_stable = all_stable && ok;
      if (format == Format::json) {
        nlohmann::ordered_json j{{"inner", cfg.inner},
                                 {"outer", m},
                                 {"threshold", res.threshold},
                                 {"stable", ok}};
        sink.line(std::string(m == first ? " " : ",") + j.dump());
      } else {
        sink.line(std::to_string(cfg.inner) + (format == Format::csv ? "," : "  ") +
                  std::to_string(m) + (format == Format::csv ? "," : "  ") +
                  format_shortest(res.threshold) +
                  (format == Format::csv ? (ok ? ",1" : ",0")
                                         : (ok ? "" : "  unstable")));
      }
    }
    if (format == Format::json) sink.line("]");
    if (!all_stable) throw NumericalError("some outer lengths were unstable");
    return kExitOk;
  }
  if (cfg.outer == 0) throw UsageError("longrep needs --outer m or --outer-range");
  const auto model = longrep_model(cfg.inner, cfg.outer);
  if (cfg.p || !cfg.range.empty()) {
    RowWriter w(sink, cfg.format.value_or(Format::csv), true);
    w.header();
    bool all_stable = true;
    const auto emit = [&](const RatePoint& row) {
      all_stable = all_stable && row.stable;
      w.row(row);
    };
    if (cfg.p) {
      emit(rate(model, family, *cfg.p));
    } else {
      const auto r = parse_range(cfg.range);
      sweep(model, family, r.a, r.b, r.steps, cfg.threads, emit);
    }
    w.footer();
    if (!all_stable) throw NumericalError("estimator flagged instability");
    return kExitOk;
  }
  const auto topts = threshold_options(cfg);
  return emit_threshold(cfg, sink, threshold(model, family, topts),
                        topts.tol);
}

inline std::string format_coefficient(double c) { return detail::fixed(c, 8); }

inline int cmd_optimize(const RunConfig& cfg, Sink& sink) {
  const auto model = stack_model(stack_from(cfg), stack_options(cfg));
  OptimizerOptions opts;
  opts.restarts = cfg.restarts;
  opts.seed = cfg.seed;
  opts.threads = cfg.threads;
  const auto res = optimize_channel(model, opts);
  const Format format = cfg.format.value_or(Format::table);
  nlohmann::ordered_json j;
  j["stack"] = res.description;
  j["coefficients"] = {{"x", res.coefficients[0]},
                       {"y", res.coefficients[1]},
                       {"z", res.coefficients[2]}};
  j["p_hash"] = res.p_hash;
  j["non_additivity"] = res.q;
  nlohmann::ordered_json trace = nlohmann::ordered_json::array();
  for (const auto& t : res.trace) {
    trace.push_back({{"start", t.start},
                     {"best", t.best},
                     {"non_additivity", t.q},
                     {"p_hash", t.p_hash},
                     {"evaluations", t.evaluations}});
  }
  j["trace"] = std::move(trace);
  const std::string row =
      (res.description.empty() ? "(no encoding)" : res.description) + " & " +
      format_coefficient(res.coefficients[0]) + " & " +
      format_coefficient(res.coefficients[1]) + " & " +
      format_coefficient(res.coefficients[2]) + " & " +
      detail::fixed(res.q, 10) + " & " + detail::fixed(res.p_hash, 10);
  if (format == Format::csv) {
    sink.line("stack,cx,cy,cz,non_additivity,p_hash");
    sink.line("\"" + res.description + "\"," +
              format_shortest(res.coefficients[0]) + "," +
              format_shortest(res.coefficients[1]) + "," +
              format_shortest(res.coefficients[2]) + "," +
              format_shortest(res.q) + "," + format_shortest(res.p_hash));
  } else if (format == Format::json) {
    sink.line(j.dump(2));
  } else {
    sink.line(j.dump(2));
    sink.line(row);
  }
  return kExitOk;
}

struct TableSummary {
  std::size_t passed = 0;
  std::size_t total = 0;
};

// Re-runs one bundled manifest and prints a PASS/FAIL line per row.
inline TableSummary run_table(const std::string& name, const RunConfig& cfg,
                              Sink& sink) {
  const std::string_view text = table_source(name);
  TableSummary summary;
  const auto verdict = [&](bool pass) {
    ++summary.total;
    if (pass) ++summary.passed;
    return pass ? "PASS" : "FAIL";
  };
  if (is_threshold_table(text)) {
    for (const auto& row : parse_threshold_table(text)) {
      const double tol = cfg.tol.value_or(row.tol);
      std::string line = name + "  " + row.label + "  ";
      try {
        const auto model =
            stack_model(parse_stack(row.stack), stack_options(cfg));
        ThresholdOptions t;
        t.tol = std::min(1e-11, 0.1 * tol);
        const auto res = threshold(model, parse_channel_spec(row.channel), t);
        const double diff = res.threshold - row.expected;
        const bool pass = res.bracketed && std::abs(diff) <= tol;
        line += "expected " + format_shortest(row.expected) + "  computed " +
                detail::fixed(res.threshold, 12) + "  diff " +
                format_shortest(diff) + "  " + verdict(pass);
      } catch (const std::exception& e) {
        line += std::string("error: ") + e.what() + "  " + verdict(false);
      }
      sink.line(line);
    }
  } else {
    for (const auto& row : parse_optimized_table(text)) {
      const double tol = cfg.tol.value_or(row.tol);
      std::string line = name + "  " + row.label + "  ";
      try {
        const auto model =
            stack_model(parse_stack(row.stack), stack_options(cfg));
        const auto hr = nonadditivity_at_hashing(model, {row.cx, row.cy, row.cz});
        const double dq = hr.q - row.q, dp = hr.p_hash - row.p_hash;
        const bool pass = std::abs(dq) <= tol && std::abs(dp) <= tol;
        line += "Q " + detail::fixed(hr.q, 10) + " (diff " +
                format_shortest(dq) + ")  p_hash " +
                detail::fixed(hr.p_hash, 10) + " (diff " +
                format_shortest(dp) + ")  " + verdict(pass);
      } catch (const std::exception& e) {
        line += std::string("error: ") + e.what() + "  " + verdict(false);
      }
      sink.line(line);
    }
  }
  sink.line(name + ": " + std::to_string(summary.passed) + "/" +
            std::to_string(summary.total) + " cells PASS");
  return summary;
}

inline int cmd_tables(const RunConfig& cfg, Sink& sink) {
  if (cfg.tol && !(*cfg.tol > 0.0)) throw UsageError("--tol must be positive");
  std::vector<std::string> names;
  if (cfg.name.empty() || cfg.name == "list") {
    for (const auto& n : table_names()) sink.line(n);
    return kExitOk;
  }
  if (cfg.name == "all") {
    names = table_names();
  } else {
    table_source(cfg.name);  // validates the name
    names.push_back(cfg.name);
  }
  bool all = true;
  for (const auto& n : names) {
    const auto s = run_table(n, cfg, sink);
    all = all && s.passed == s.total;
  }
  return all ? kExitOk : kExitNumerical;
}

// Runs one command; errors are reported on `err` with a one-line message.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  try {
    Sink sink(cfg.out, out);
    if (cfg.command == "codes") return cmd_codes(cfg, sink);
    if (cfg.command == "rate") return cmd_rate(cfg, sink);
    if (cfg.command == "threshold") return cmd_threshold(cfg, sink);
    if (cfg.command == "sweep") return cmd_sweep(cfg, sink);
    if (cfg.command == "longrep") return cmd_longrep(cfg, sink);
    if (cfg.command == "optimize") return cmd_optimize(cfg, sink);
    if (cfg.command == "tables") return cmd_tables(cfg, sink);
    throw UsageError("unknown command '" + cfg.command + "'");
  } catch (const NumericalError& e) {
    err << "qcoset: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "qcoset: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "qcoset: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    // Budget overruns, domain errors and other numerical failures.
    err << "qcoset: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace qcoset::cli

#endif  // QCOSET_TOOLS_CLI_HPP_
