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

// Accuracy experiments:
//
//   run_accuracy_table  relative error of each method on seeded random data,
//                       against the exact expansion sum of the same data.
//   run_hours100        3,600,000 ticks of 0.1f: the classic drifting clock.
//   run_scaling_study   median relative error versus N, with log-log slopes.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twofold/dispatch.hpp"
#include "twofold/oracle.hpp"
#include "twofold/report.hpp"
#include "twofold/rng.hpp"

namespace twofold {

struct AccuracyConfig {
  std::size_t n = 1'000'000;
  std::uint64_t seed = 1;
  std::vector<Method> methods = {Method::Direct, Method::Kahan, Method::TwofoldFast};
  std::vector<Precision> precisions = {Precision::F32, Precision::F64};
  std::vector<GeneratorKind> generators = {GeneratorKind::NumericalRecipes, GeneratorKind::Mmix};
  std::vector<Interval> intervals = {Interval::Unit, Interval::Symmetric};
  Flavor flavor = Flavor::sequential();
};

struct AccuracyRow {
  Precision precision;
  GeneratorKind generator;
  Interval interval;
  Method method;
  std::size_t n;
  std::uint64_t seed;
  // Empty when the row is invalid (non-finite result or zero reference).
  std::optional<double> rel_error;
  // Relative error of the value field alone, and the raw result, kept so the
  // error channel can be compared against the true deviation.
  std::optional<double> value_rel_error;
  Twofold<double> result;
};

namespace detail {

template <Real T>
void accuracy_rows(const AccuracyConfig& cfg, GeneratorKind gen, Interval interval,
                   std::vector<AccuracyRow>& out) {
  const std::vector<T> data = generate<T>(gen, cfg.seed, interval, cfg.n);
  const std::span<const T> view(data);
  const Expansion reference = exact_sum(view);
  for (Method m : cfg.methods) {
    AccuracyRow row{precision_of<T>(), gen, interval, m, cfg.n, cfg.seed, std::nullopt, std::nullopt, {}};
    const SumResult<double> r = run_flavor(m, cfg.flavor, view);
    row.result = r.twofold;
    if (!is_range_failure(r.twofold)) {
      row.rel_error = score(m, r, reference);
      row.value_rel_error = relative_error(r.twofold.value, reference);
    }
    out.push_back(row);
  }
}

}  // namespace detail

inline std::vector<AccuracyRow> run_accuracy_table(const AccuracyConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("accuracy: N must be at least 1");
  std::vector<AccuracyRow> rows;
  for (Precision p : cfg.precisions)
    for (GeneratorKind g : cfg.generators)
      for (Interval i : cfg.intervals) {
        if (p == Precision::F32)
          detail::accuracy_rows<float>(cfg, g, i, rows);
        else
          detail::accuracy_rows<double>(cfg, g, i, rows);
      }
  return rows;
}

inline report::Table accuracy_table(const std::vector<AccuracyRow>& rows) {
  report::Table t{{"precision", "generator", "interval", "method", "N", "seed", "rel_error"}, {}};
  for (const AccuracyRow& r : rows) {
    t.rows.push_back({std::string(to_string(r.precision)), std::string(to_string(r.generator)),
                      std::string(to_string(r.interval)), std::string(to_string(r.method)),
                      std::to_string(r.n), std::to_string(r.seed),
                      r.rel_error ? report::fmt(*r.rel_error + 0.0, "%.6e") : "invalid"});
  }
  return t;
}

// Published single-run results (seed unknown), shown for order-of-magnitude
// comparison only.
inline void write_accuracy_footer(std::ostream& os) {
  os << "\nPublished reference (1e6 elements, seed unknown; compare orders of magnitude only):\n\n"
        "| precision | generator | interval | direct | kahan | twofold-fast |\n"
        "| --- | --- | --- | --- | --- | --- |\n"
        "| f32 | nr | unit | -1.07759e-07 | 1.72372e-08 | -5.24003e-11 |\n"
        "| f32 | nr | sym | -2.73821e-04 | 3.69634e-09 | 0 |\n"
        "| f32 | mmix | unit | -4.74619e-06 | 5.19367e-09 | 9.09826e-11 |\n"
        "| f32 | mmix | sym | 1.65869e-06 | -2.07055e-08 | 0 |\n"
        "| f64 | nr | unit | 2.72008e-17 | 2.72008e-17 | 0 |\n"
        "| f64 | nr | sym | 3.20017e-13 | -1.06717e-16 | 0 |\n"
        "| f64 | mmix | unit | -1.63303e-14 | -2.73781e-17 | 0 |\n"
        "| f64 | mmix | sym | 5.17981e-14 | -1.14555e-17 | 0 |\n";
}

// ---------------------------------------------------------------------------

struct Hours100Row {
  std::string label;
  Method method;
  double result_hours;
  double deviation_hours;
  std::optional<double> estimate_hours;
};

inline constexpr std::size_t kHours100Ticks = 3'600'000;

// A clock ticking every 0.1 s for 100 hours, accumulating seconds in binary32
// (the "Double" row keeps binary32 ticks but a binary64 counter).
inline std::vector<Hours100Row> run_hours100() {
  const std::vector<float> ticks(kHours100Ticks, 0.1f);
  const std::span<const float> view(ticks);
  auto hours = [](double seconds) { return seconds / 3600.0; };
  auto row = [&](std::string label, Method m, double result_seconds,
                 std::optional<double> estimate_seconds) {
    const double h = hours(result_seconds);
    return Hours100Row{std::move(label), m, h, std::fabs(100.0 - h),
                       estimate_seconds ? std::optional<double>(hours(*estimate_seconds)) : std::nullopt};
  };

  std::vector<Hours100Row> rows;
  rows.push_back(row("Direct", Method::Direct, sum_direct(view).twofold.value, std::nullopt));
  rows.push_back(row("Double", Method::WideAccumulator, sum_wide(view).twofold.value, std::nullopt));
  rows.push_back(row("Kahan", Method::Kahan, sum_kahan(view).twofold.value, std::nullopt));
  const Twofold<float> tf = sum_twofold_fast(view).twofold;
  const double improved = static_cast<double>(tf.value) + static_cast<double>(tf.error);
  rows.push_back(row("Twofold", Method::TwofoldFast, improved, static_cast<double>(tf.error)));
  return rows;
}

inline report::Table hours100_table(const std::vector<Hours100Row>& rows) {
  report::Table t{{"method", "result_hours", "deviation_hours", "estimate_hours"}, {}};
  for (const Hours100Row& r : rows) {
    t.rows.push_back({r.label, report::fmt(r.result_hours, "%.6g"), report::fmt(r.deviation_hours, "%.6g"),
                      r.estimate_hours ? report::fmt(*r.estimate_hours, "%.6g") : "-"});
  }
  return t;
}

// ---------------------------------------------------------------------------

struct ScalingConfig {
  std::vector<std::size_t> ns = {1'000, 10'000, 100'000, 1'000'000};
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  GeneratorKind generator = GeneratorKind::NumericalRecipes;
  std::vector<Method> methods = {Method::Direct, Method::TwofoldFast};
};

struct ScalingRow {
  std::size_t n;
  Method method;
  double median_abs_rel_error;
};

struct ScalingSlope {
  Method method;
  // Least-squares slope of log10(median) against log10(N); empty when fewer
  // than two points have a nonzero median.
  std::optional<double> slope;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  std::vector<ScalingSlope> slopes;
};

inline double median(std::vector<double> v) {
  if (v.empty()) return 0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return lo / 2 + hi / 2;
}

inline std::optional<double> loglog_slope(const std::vector<std::pair<double, double>>& points) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (auto [x, y] : points) {
    if (!(x > 0) || !(y > 0)) continue;
    const double lx = std::log10(x), ly = std::log10(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  if (k < 2) return std::nullopt;
  const double denom = static_cast<double>(k) * sxx - sx * sx;
  if (denom == 0) return std::nullopt;
  return (static_cast<double>(k) * sxy - sx * sy) / denom;
}

// binary32 uniform [0,1) data; trial t uses seed + t. Trials are independent
// and run in order, so the report does not depend on scheduling.
inline ScalingResult run_scaling_study(const ScalingConfig& cfg) {
  constexpr double kMaxN = 1e7;  // about 1/eps for binary32
  for (std::size_t n : cfg.ns) {
    if (n < 1 || static_cast<double>(n) > kMaxN)
      throw std::invalid_argument("scaling: each N must lie in [1, 1e7]");
  }
  ScalingResult result;
  std::vector<std::vector<std::pair<double, double>>> points(cfg.methods.size());
  for (std::size_t n : cfg.ns) {
    std::vector<std::vector<double>> errs(cfg.methods.size());
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const auto data = generate<float>(cfg.generator, cfg.seed + t, Interval::Unit, n);
      const std::span<const float> view(data);
      const Expansion reference = exact_sum(view);
      for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
        const Method m = cfg.methods[k];
        const auto e = score(m, run_flavor(m, Flavor::sequential(), view), reference);
        errs[k].push_back(e ? std::fabs(*e) : 0.0);
      }
    }
    for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
      const double med = median(errs[k]);
      result.rows.push_back({n, cfg.methods[k], med});
      points[k].emplace_back(static_cast<double>(n), med);
    }
  }
  for (std::size_t k = 0; k < cfg.methods.size(); ++k)
    result.slopes.push_back({cfg.methods[k], loglog_slope(points[k])});
  return result;
}

inline void write_scaling(std::ostream& os, const ScalingResult& r, report::Format f) {
  report::Table rows{{"N", "method", "median_abs_rel_error"}, {}};
  for (const ScalingRow& row : r.rows)
    rows.rows.push_back({std::to_string(row.n), std::string(to_string(row.method)),
                         report::fmt(row.median_abs_rel_error, "%.6e")});
  report::Table slopes{{"method", "loglog_slope"}, {}};
  for (const ScalingSlope& s : r.slopes)
    slopes.rows.push_back({std::string(to_string(s.method)), s.slope ? report::fmt(*s.slope, "%.4f") : "n/a"});
  rows.write(os, f);
  os << '\n';
  slopes.write(os, f);
}

}  // namespace twofold
