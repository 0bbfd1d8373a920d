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


// Acceptance runner: one line per criterion, PASS / FAIL / FLAG.
// FLAG marks timing-dependent properties that are reported but never fail
// the run (shared hardware makes them noisy). Exit status is nonzero only
// when a hard criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "exact_oracle.hpp"
#include "twofold/twofold.hpp"

namespace {

using namespace twofold;
using testing::exact;

enum class Verdict { Pass, Fail, Flag };

struct Outcome {
  Verdict verdict = Verdict::Pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // 0: no runtime budget
  std::function<Outcome()> run;
};

std::string num(double v, const char* spec = "%.6g") { return report::fmt(v, spec); }

Outcome hours100() {
  const auto rows = run_hours100();
  const Hours100Row &direct = rows[0], &wide = rows[1], &kahan = rows[2], &tf = rows[3];
  const bool ok = std::fabs(direct.result_hours - 96.3958) <= 5e-4 && kahan.deviation_hours < 1e-5 &&
                  wide.deviation_hours <= 1.5e-6 && std::fabs(tf.result_hours - 99.9359) <= 1e-3 &&
                  tf.estimate_hours && std::fabs(*tf.estimate_hours - 3.54008) <= 1e-2;
  std::ostringstream d;
  d << "direct=" << num(direct.result_hours) << "h kahan_dev=" << num(kahan.deviation_hours)
    << "h wide_dev=" << num(wide.deviation_hours) << "h twofold=" << num(tf.result_hours)
    << "h estimate=" << num(tf.estimate_hours.value_or(NAN)) << 'h';
  return {ok ? Verdict::Pass : Verdict::Fail, d.str()};
}

Outcome eft_exactness() {
  std::mt19937_64 rng(1);
  std::size_t failures = 0;
  constexpr std::size_t kFloatPairs = 1'000'000, kDoublePairs = 100'000;
  for (std::size_t i = 0; i < kFloatPairs; ++i) {
    float a = testing::random_scaled<float>(rng, -30, 30);
    float b = testing::random_scaled<float>(rng, -30, 30);
    const Twofold<float> k = two_sum(a, b);
    if (double(k.value) + double(k.error) != double(a) + double(b)) ++failures;
    if (std::fabs(a) < std::fabs(b)) std::swap(a, b);
    const Twofold<float> f = fast_two_sum(a, b);
    if (double(f.value) + double(f.error) != double(a) + double(b)) ++failures;
  }
  for (std::size_t i = 0; i < kDoublePairs; ++i) {
    double a = testing::random_scaled<double>(rng, -300, 300);
    double b = testing::random_scaled<double>(rng, -300, 300);
    const mpq_class sum = exact(a) + exact(b);
    const Twofold<double> k = two_sum(a, b);
    if (exact(k.value) + exact(k.error) != sum) ++failures;
    if (std::fabs(a) < std::fabs(b)) std::swap(a, b);
    const Twofold<double> f = fast_two_sum(a, b);
    if (exact(f.value) + exact(f.error) != sum) ++failures;
  }
  return {failures == 0 ? Verdict::Pass : Verdict::Fail,
          "1e6 f32 + 1e5 f64 pairs, " + std::to_string(failures) + " failures"};
}

template <Real T>
std::size_t value_mismatches() {
  std::size_t bad = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto x = generate<T>(seed % 2 ? GeneratorKind::NumericalRecipes : GeneratorKind::Mmix, seed,
                               seed % 4 < 2 ? Interval::Unit : Interval::Symmetric, 10'000);
    const T d = sum_direct<T>(x).twofold.value;
    const T f = sum_twofold_fast<T>(x).twofold.value;
    const T r = sum_twofold_rigorous<T>(x).twofold.value;
    if (std::memcmp(&d, &f, sizeof(T)) != 0 || std::memcmp(&d, &r, sizeof(T)) != 0) ++bad;
  }
  return bad;
}

Outcome value_equivalence() {
  const std::size_t bad = value_mismatches<float>() + value_mismatches<double>();
  return {bad == 0 ? Verdict::Pass : Verdict::Fail, "200 arrays, " + std::to_string(bad) + " mismatches"};
}

Outcome accuracy_bands() {
  AccuracyConfig cfg;
  cfg.n = 1'000'000;
  cfg.seed = 1;
  bool ok = true;
  double direct_lo = INFINITY, direct_hi = 0, kahan_hi = 0, tf32_hi = 0, tf64_hi = 0;
  for (const AccuracyRow& r : run_accuracy_table(cfg)) {
    if (!r.rel_error) {
      ok = false;
      continue;
    }
    const double e = std::fabs(*r.rel_error);
    if (r.precision == Precision::F32) {
      if (r.method == Method::Direct) {
        direct_lo = std::min(direct_lo, e);
        direct_hi = std::max(direct_hi, e);
      } else if (r.method == Method::Kahan) {
        kahan_hi = std::max(kahan_hi, e);
      } else {
        tf32_hi = std::max(tf32_hi, e);
      }
    } else if (r.method == Method::TwofoldFast) {
      tf64_hi = std::max(tf64_hi, e);
    }
  }
  ok = ok && direct_lo >= 1e-8 && direct_hi <= 1e-3 && kahan_hi <= 1e-7 && tf32_hi <= 1e-9 && tf64_hi <= 1e-30;
  std::ostringstream d;
  d << "f32 direct=[" << num(direct_lo, "%.3e") << ", " << num(direct_hi, "%.3e") << "] kahan<=" << num(kahan_hi, "%.3e")
    << " twofold<=" << num(tf32_hi, "%.3e") << "; f64 twofold<=" << num(tf64_hi, "%.3e");
  return {ok ? Verdict::Pass : Verdict::Fail, d.str()};
}

Outcome scaling() {
  const ScalingResult r = run_scaling_study(ScalingConfig{});
  bool ok = true;
  std::ostringstream d;
  const std::optional<double> slope = r.slopes[0].slope;
  ok = slope && *slope >= 0.3 && *slope <= 0.7;
  d << "direct slope=" << (slope ? num(*slope, "%.3f") : "n/a");
  for (std::size_t i = 0; i + 1 < r.rows.size(); i += 2) {
    const ScalingRow &direct = r.rows[i], &tf = r.rows[i + 1];
    if (direct.n >= 10'000 && !(tf.median_abs_rel_error <= direct.median_abs_rel_error / 10)) ok = false;
    d << " N=" << direct.n << ':' << num(direct.median_abs_rel_error, "%.2e") << '/'
      << num(tf.median_abs_rel_error, "%.2e");
  }
  return {ok ? Verdict::Pass : Verdict::Fail, d.str()};
}

// Sequential rigorous twofold on one array, checked against an exact
// rational trace: |value + error - exact| <= 2 eps |exact|.
template <Real T>
bool small_instance_ok(const std::vector<T>& x, std::size_t& rounded_match) {
  T s = 0;
  mpq_class roundoff = 0;
  for (T v : x) {
    const T t = s + v;
    roundoff += exact(s) + exact(v) - exact(t);
    s = t;
  }
  const mpq_class truth = testing::exact_sum(x);
  const Twofold<T> r = sum_twofold_rigorous(x).twofold;
  if (r.value != s || exact(s) + roundoff != truth) return false;
  const mpq_class improved = exact(r.value) + exact(r.error);
  if (T(r.value + r.error) == testing::round_to<T>(truth)) ++rounded_match;
  mpq_class residual = improved - truth;
  if (residual < 0) residual = -residual;
  mpq_class bound = truth < 0 ? mpq_class(-truth) : truth;
  bound *= 2 * exact(unit_roundoff<T>);
  return residual <= bound;
}

template <Real T>
void small_instances(std::size_t& checked, std::size_t& failed, std::size_t& rounded_match) {
  const std::vector<T> magnitudes = {T(1), std::ldexp(T(1), -std::numeric_limits<T>::digits), T(3) / T(1024),
                                     T(1 << 20), T(0.1)};
  for (unsigned mask = 0; mask < 32; ++mask) {
    std::vector<T> x = magnitudes;
    for (unsigned i = 0; i < 5; ++i)
      if (mask & (1u << i)) x[i] = -x[i];
    ++checked;
    if (!small_instance_ok(x, rounded_match)) ++failed;
  }
  std::mt19937_64 rng(sizeof(T));
  std::uniform_int_distribution<std::size_t> len(1, 20);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<T> x(len(rng));
    for (T& v : x) v = testing::random_scaled<T>(rng, -12, 12);
    ++checked;
    if (!small_instance_ok(x, rounded_match)) ++failed;
  }
}

Outcome small_instance_equivalence() {
  std::size_t checked = 0, failed = 0, rounded = 0;
  small_instances<float>(checked, failed, rounded);
  small_instances<double>(checked, failed, rounded);
  return {failed == 0 ? Verdict::Pass : Verdict::Fail,
          std::to_string(checked) + " arrays, " + std::to_string(failed) + " failures, " + std::to_string(rounded) +
              " with fl(value+error) correctly rounded"};
}

Outcome performance() {
  bench::Options opt;
  opt.repetitions = 10;
  opt.warmup = 2;
  bench::pin_to_current_cpu();
  std::ostringstream d;
  bool holds = true;

  const Flavor vec16 = Flavor::vectorized(16);
  const double direct = bench::run_noread_baseline(Method::Direct, vec16, Precision::F64, opt)->megaflops;
  const double fast = bench::run_noread_baseline(Method::TwofoldFast, vec16, Precision::F64, opt)->megaflops;
  const double rig = bench::run_noread_baseline(Method::TwofoldRigorous, vec16, Precision::F64, opt)->megaflops;
  const double r_fast = direct / fast, r_rig = direct / rig;
  holds = holds && r_fast >= 2 && r_fast <= 6 && r_rig >= 4 && r_rig <= 10;
  d << "noread f64 vec:16 direct/fast=" << num(r_fast, "%.2f") << " direct/rigorous=" << num(r_rig, "%.2f");

  const double read1 = bench::run_read_baseline(1, bench::Tier::Large, Precision::F32, opt)->megaflops;
  const auto large = bench::run_bench(
      std::vector<bench::Cell>{{Method::Direct, Flavor::sequential(), Precision::F32, bench::Tier::Large,
                                bench::Operation::Sum}},
      opt);
  const double direct_large = large[0].megaflops;
  holds = holds && direct_large <= 1.1 * read1;
  d << "; large direct/read1=" << num(direct_large / read1, "%.2f");

  bench::Grid grid;
  grid.methods = {Method::TwofoldFast, Method::TwofoldRigorous};
  grid.flavors = {Flavor::sequential(), default_vectorized<float>()};
  opt.repetitions = 5;
  const auto reports = bench::run_bench(grid, opt);
  std::size_t violations = 0;
  for (const bench::Finding& f : bench::check_orderings(reports))
    if (!f.holds) ++violations;
  holds = holds && violations == 0;
  d << "; rigorous>fast cells=" << violations;
  return {holds ? Verdict::Pass : Verdict::Flag, d.str()};
}

Outcome fast_math_canary() {
  const selftest::Check c = selftest::fast_math_canary();
  return {c.passed ? Verdict::Pass : Verdict::Fail,
          c.detail + "; unsafe-math build verified to fail separately (see README)"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "100-hours clock", 1, hours100},
      {2, "EFT exactness", 10, eft_exactness},
      {3, "value equivalence", 0, value_equivalence},
      {4, "accuracy bands", 30, accuracy_bands},
      {5, "scaling study", 120, scaling},
      {6, "small-instance oracle equivalence", 0, small_instance_equivalence},
      {7, "performance ratios", 0, performance},
      {8, "fast-math canary", 0, fast_math_canary},
  };
  bool failed = false;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds && o.verdict == Verdict::Pass) {
      o.verdict = Verdict::Fail;
      o.detail += "; over the " + num(c.budget_seconds, "%g") + " s budget";
    }
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "FLAG";
    std::printf("criterion %d: %s %s (%s; %.2f s)\n", c.id, tag, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed = failed || o.verdict == Verdict::Fail;
  }
  return failed ? 1 : 0;
}
