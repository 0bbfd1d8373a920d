// Copyright 2026 The Twofold Authors.
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

// twofold: command-line front end for the accuracy and benchmark harnesses.
//
// Exit codes: 0 success, 2 invalid flags, 3 broken rounding environment
// (selftest), 1 any other runtime failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twofold/twofold.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBrokenEnvironment = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string precision;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string generator;
  std::string interval;
  std::string methods;
  std::string flavor;
  std::string tier;
  std::string format = "csv";
  std::string out;
  bool no_meta = false;
  std::size_t trials = 100;
  std::size_t reps = 20;
  std::size_t warmup = 3;
  unsigned channels = 0;
};

template <typename Enum>
std::string valid_set(const auto& all) {
  std::string s;
  for (const auto& v : all) {
    if (!s.empty()) s += ", ";
    s += std::string(twofold::to_string(static_cast<Enum>(v)));
  }
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<twofold::Method> parse_methods(const std::string& s, std::vector<twofold::Method> fallback) {
  if (s.empty()) return fallback;
  std::vector<twofold::Method> out;
  for (const std::string& name : split_list(s)) {
    const auto m = twofold::parse_method(name);
    if (!m)
      throw UsageError("unknown method '" + name + "'; valid methods: " +
                       valid_set<twofold::Method>(twofold::kAllMethods));
    out.push_back(*m);
  }
  return out;
}

std::vector<twofold::Precision> parse_precisions(const std::string& s) {
  if (s.empty()) return {twofold::Precision::F32, twofold::Precision::F64};
  const auto p = twofold::parse_precision(s);
  if (!p) throw UsageError("unknown precision '" + s + "'; valid: f32, f64");
  return {*p};
}

std::vector<twofold::GeneratorKind> parse_generators(const std::string& s) {
  if (s.empty()) return {twofold::GeneratorKind::NumericalRecipes, twofold::GeneratorKind::Mmix};
  const auto g = twofold::parse_generator(s);
  if (!g) throw UsageError("unknown generator '" + s + "'; valid: nr, mmix");
  return {*g};
}

std::vector<twofold::Interval> parse_intervals(const std::string& s) {
  if (s.empty()) return {twofold::Interval::Unit, twofold::Interval::Symmetric};
  const auto i = twofold::parse_interval(s);
  if (!i) throw UsageError("unknown interval '" + s + "'; valid: unit, sym");
  return {*i};
}

std::vector<twofold::bench::Tier> parse_tiers(const std::string& s) {
  using twofold::bench::Tier;
  if (s.empty()) return {Tier::Small, Tier::Medium, Tier::Large};
  const auto t = twofold::bench::parse_tier(s);
  if (!t) throw UsageError("unknown tier '" + s + "'; valid: small, medium, large");
  return {*t};
}

// Flavor strings like "unroll" resolve per precision, so parse for both.
twofold::Flavor parse_flavor_for(const std::string& s, twofold::Precision p, twofold::Flavor fallback) {
  if (s.empty()) return fallback;
  const auto f = p == twofold::Precision::F32 ? twofold::parse_flavor<float>(s) : twofold::parse_flavor<double>(s);
  if (!f) throw UsageError("unknown flavor '" + s + "'; valid: seq, unroll, unroll:k, vec, vec:w (k, w in 2,4,8,16)");
  return *f;
}

twofold::report::Format parse_format(const std::string& s) {
  if (s == "csv") return twofold::report::Format::Csv;
  if (s == "md") return twofold::report::Format::Markdown;
  throw UsageError("unknown format '" + s + "'; valid: csv, md");
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void write_meta(std::ostream& os, const Flags& f, const std::string& command) {
  if (f.no_meta) return;
  os << "# twofold " << command << " generated=" << twofold::bench::detail::utc_timestamp() << '\n';
}

int cmd_accuracy(const Flags& f) {
  twofold::AccuracyConfig cfg;
  cfg.n = f.n ? f.n : 1'000'000;
  cfg.seed = f.seed;
  cfg.methods = parse_methods(f.methods, cfg.methods);
  cfg.precisions = parse_precisions(f.precision);
  cfg.generators = parse_generators(f.generator);
  cfg.intervals = parse_intervals(f.interval);
  const auto fmt = parse_format(f.format);
  // Flavor applies to every precision; validate against each.
  for (auto p : cfg.precisions) cfg.flavor = parse_flavor_for(f.flavor, p, twofold::Flavor::sequential());
  if (cfg.precisions.size() > 1 && !f.flavor.empty() &&
      parse_flavor_for(f.flavor, twofold::Precision::F32, {}) != parse_flavor_for(f.flavor, twofold::Precision::F64, {}))
    throw UsageError("flavor '" + f.flavor + "' resolves differently per precision; pass --precision or explicit lanes");

  const auto rows = twofold::run_accuracy_table(cfg);
  Output out(f.out);
  write_meta(out.stream(), f, "accuracy");
  twofold::accuracy_table(rows).write(out.stream(), fmt);
  if (fmt == twofold::report::Format::Markdown) twofold::write_accuracy_footer(out.stream());
  return kExitOk;
}

int cmd_hours100(const Flags& f) {
  const auto fmt = parse_format(f.format);
  Output out(f.out);
  write_meta(out.stream(), f, "hours100");
  twofold::hours100_table(twofold::run_hours100()).write(out.stream(), fmt);
  return kExitOk;
}

int cmd_scaling(const Flags& f) {
  twofold::ScalingConfig cfg;
  cfg.seed = f.seed;
  cfg.trials = f.trials;
  if (!f.generator.empty()) cfg.generator = parse_generators(f.generator).front();
  if (f.n) {
    if (f.n > 10'000'000) throw std::invalid_argument("scaling: --n must not exceed 10000000");
    cfg.ns.clear();
    for (std::size_t n = 1000; n <= f.n; n *= 10) cfg.ns.push_back(n);
    if (cfg.ns.empty()) cfg.ns.push_back(f.n);
  }
  cfg.methods = parse_methods(f.methods, cfg.methods);
  const auto fmt = parse_format(f.format);
  const auto result = twofold::run_scaling_study(cfg);
  Output out(f.out);
  write_meta(out.stream(), f, "scaling");
  twofold::write_scaling(out.stream(), result, fmt);
  return kExitOk;
}

twofold::bench::Options bench_options(const Flags& f) {
  twofold::bench::Options opt;
  opt.repetitions = f.reps;
  opt.warmup = f.warmup;
  opt.seed = f.seed;
  return opt;
}

void write_bench(const Flags& f, const std::string& command, std::vector<twofold::bench::KernelReport> reports,
                 const twofold::bench::Options& opt, std::optional<int> pinned) {
  twofold::bench::sort_reports(reports);
  const auto fmt = parse_format(f.format);
  Output out(f.out);
  write_meta(out.stream(), f, command);
  twofold::bench::Environment env{opt.tiers, pinned, opt.repetitions, opt.warmup, opt.min_seconds};
  out.stream() << "# env: " << twofold::bench::describe(env) << '\n';
  twofold::bench::reports_table(reports).write(out.stream(), fmt);
  for (const auto& finding : twofold::bench::check_orderings(reports))
    if (!finding.holds) out.stream() << "# flag: " << finding.property << ": " << finding.detail << '\n';
}

int cmd_bench(const Flags& f) {
  const auto opt = bench_options(f);
  twofold::bench::Grid grid;
  grid.methods = parse_methods(f.methods, grid.methods);
  grid.precisions = parse_precisions(f.precision);
  grid.tiers = parse_tiers(f.tier);
  std::vector<twofold::bench::Cell> cells;
  for (auto p : grid.precisions) {
    twofold::bench::Grid g = grid;
    g.precisions = {p};
    g.flavors = {parse_flavor_for(f.flavor, p, twofold::Flavor::sequential())};
    for (const auto& c : g.cells()) cells.push_back(c);
  }
  const auto pinned = twofold::bench::pin_to_current_cpu();
  write_bench(f, "bench", twofold::bench::run_bench(cells, opt), opt, pinned);
  return kExitOk;
}

int cmd_read_baseline(const Flags& f) {
  const auto opt = bench_options(f);
  if (f.channels != 0 && f.channels != 1 && f.channels != 2) throw UsageError("--channels must be 1 or 2");
  const std::vector<unsigned> channels = f.channels ? std::vector<unsigned>{f.channels} : std::vector<unsigned>{1, 2};
  const auto pinned = twofold::bench::pin_to_current_cpu();
  std::vector<twofold::bench::KernelReport> reports;
  for (auto p : parse_precisions(f.precision))
    for (auto t : parse_tiers(f.tier))
      for (unsigned c : channels)
        if (auto r = twofold::bench::run_read_baseline(c, t, p, opt)) reports.push_back(*r);
  write_bench(f, "read-baseline", std::move(reports), opt, pinned);
  return kExitOk;
}

int cmd_noread_baseline(const Flags& f) {
  const auto opt = bench_options(f);
  const auto methods = parse_methods(f.methods, {twofold::Method::Direct, twofold::Method::TwofoldFast,
                                                 twofold::Method::TwofoldRigorous, twofold::Method::Kahan,
                                                 twofold::Method::WideAccumulator});
  const auto pinned = twofold::bench::pin_to_current_cpu();
  std::vector<twofold::bench::KernelReport> reports;
  for (auto p : parse_precisions(f.precision)) {
    const twofold::Flavor flavor =
        parse_flavor_for(f.flavor, p, twofold::Flavor::vectorized(16));
    for (auto m : methods) {
      if (m == twofold::Method::WideAccumulator && p == twofold::Precision::F64) continue;
      if (auto r = twofold::bench::run_noread_baseline(m, flavor, p, opt)) reports.push_back(*r);
    }
  }
  write_bench(f, "noread-baseline", std::move(reports), opt, pinned);
  return kExitOk;
}

int cmd_selftest(const Flags& f) {
  const auto result = twofold::selftest::run();
  Output out(f.out);
  write_meta(out.stream(), f, "selftest");
  for (const auto& c : result.checks)
    out.stream() << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  return result.passed() ? kExitOk : kExitBrokenEnvironment;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twofold: value+error summation accuracy and throughput harness"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", flags.format, "Report format: csv or md");
    sub->add_option("--out", flags.out, "Write the report to this path instead of stdout");
    sub->add_flag("--no-meta", flags.no_meta, "Omit the timestamp metadata line");
    sub->add_option("--seed", flags.seed, "Generator seed (default 1)");
  };
  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--precision", flags.precision, "f32 or f64 (default: both)");
    sub->add_option("--n", flags.n, "Element count");
    sub->add_option("--generator", flags.generator, "nr or mmix (default: both)");
    sub->add_option("--interval", flags.interval, "unit ([0,1)) or sym ([-1,1)) (default: both)");
    sub->add_option("--methods", flags.methods, "Comma-separated methods");
    sub->add_option("--flavor", flags.flavor, "seq, unroll[:k] or vec[:w]");
  };
  auto add_bench = [&](CLI::App* sub) {
    sub->add_option("--precision", flags.precision, "f32 or f64 (default: both)");
    sub->add_option("--tier", flags.tier, "small, medium or large (default: all)");
    sub->add_option("--reps", flags.reps, "Samples per cell; best is reported (default 20)");
    sub->add_option("--warmup", flags.warmup, "Warm-up calls per cell (default 3)");
  };

  std::string command;
  auto* accuracy = app.add_subcommand("accuracy", "Relative error of each method on random data");
  add_common(accuracy);
  add_data(accuracy);
  auto* hours100 = app.add_subcommand("hours100", "100-hour clock drift test");
  add_common(hours100);
  auto* scaling = app.add_subcommand("scaling", "Median relative error versus N");
  add_common(scaling);
  scaling->add_option("--n", flags.n, "Largest N; decades from 1000 up to it (default 1000000)");
  scaling->add_option("--generator", flags.generator, "nr or mmix (default nr)");
  scaling->add_option("--methods", flags.methods, "Comma-separated methods");
  scaling->add_option("--trials", flags.trials, "Seeded trials per N (default 100)");
  auto* bench = app.add_subcommand("bench", "Throughput grid: method x flavor x precision x tier");
  add_common(bench);
  add_bench(bench);
  bench->add_option("--methods", flags.methods, "Comma-separated methods");
  bench->add_option("--flavor", flags.flavor, "seq, unroll[:k] or vec[:w]");
  auto* read = app.add_subcommand("read-baseline", "Memory read roof (read1/read2)");
  add_common(read);
  add_bench(read);
  read->add_option("--channels", flags.channels, "1 (sum) or 2 (dot) (default: both)");
  auto* noread = app.add_subcommand("noread-baseline", "Compute roof on register-resident data");
  add_common(noread);
  noread->add_option("--precision", flags.precision, "f32 or f64 (default: both)");
  noread->add_option("--methods", flags.methods, "Comma-separated methods");
  noread->add_option("--flavor", flags.flavor, "seq, unroll[:k] or vec[:w] (default vec:16)");
  noread->add_option("--reps", flags.reps, "Samples; best is reported (default 20)");
  noread->add_option("--warmup", flags.warmup, "Warm-up calls (default 3)");
  auto* selftest = app.add_subcommand("selftest", "EFT exactness and fast-math canary");
  add_common(selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*accuracy) return cmd_accuracy(flags);
    if (*hours100) return cmd_hours100(flags);
    if (*scaling) return cmd_scaling(flags);
    if (*bench) return cmd_bench(flags);
    if (*read) return cmd_read_baseline(flags);
    if (*noread) return cmd_noread_baseline(flags);
    if (*selftest) return cmd_selftest(flags);
  } catch (const UsageError& e) {
    std::cerr << "twofold: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "twofold: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "twofold: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
