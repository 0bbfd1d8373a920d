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

// Throughput measurement for the kernels.
//
// Every cell of method x flavor x precision x tier x {sum, dot} is timed
// best-of-R on a monotonic clock. Each sample repeats the kernel enough times
// to last at least `min_seconds`. Megaflops count one addition per element
// for sums and dot products alike: megaflops == N * repetitions / seconds / 1e6.
//
// Two baselines bracket the kernels: read1/read2 stream one or two arrays
// through a trivial integer reduction (the memory roof), and "noread" runs a
// kernel on a register-resident block so no memory traffic is involved (the
// compute roof).

#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <ctime>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#if defined(__linux__)
#include <sched.h>
#endif

#include "twofold/dispatch.hpp"
#include "twofold/kernels.hpp"
#include "twofold/report.hpp"
#include "twofold/rng.hpp"

namespace twofold::bench {

enum class Tier { Small, Medium, Large };
inline constexpr std::array<Tier, 3> kAllTiers = {Tier::Small, Tier::Medium, Tier::Large};

constexpr std::string_view to_string(Tier t) noexcept {
  switch (t) {
    case Tier::Small: return "small";
    case Tier::Medium: return "medium";
    case Tier::Large: return "large";
  }
  return "?";
}

inline std::optional<Tier> parse_tier(std::string_view s) noexcept {
  for (Tier t : kAllTiers)
    if (to_string(t) == s) return t;
  return std::nullopt;
}

// Per-array working-set sizes. Small should fit L1d, medium the last-level
// cache but not L1, large should exceed the last-level cache.
struct TierSizes {
  std::size_t small = 16 * 1024;
  std::size_t medium = 1024 * 1024;
  std::size_t large = 64 * 1024 * 1024;

  std::size_t bytes(Tier t) const noexcept {
    return t == Tier::Small ? small : t == Tier::Medium ? medium : large;
  }
};

enum class Operation { Sum, Dot };

constexpr std::string_view to_string(Operation op) noexcept { return op == Operation::Sum ? "sum" : "dot"; }

enum class ReportKind { Kernel, NoRead, Read };

constexpr std::string_view to_string(ReportKind k) noexcept {
  switch (k) {
    case ReportKind::Kernel: return "kernel";
    case ReportKind::NoRead: return "noread";
    case ReportKind::Read: return "read";
  }
  return "?";
}

struct Options {
  std::size_t repetitions = 20;  // samples; the best one is reported
  std::size_t warmup = 3;
  double min_seconds = 0.010;
  TierSizes tiers;
  std::uint64_t seed = 1;
  std::size_t noread_block_repeats = 4096;
};

struct Cell {
  Method method = Method::Direct;
  Flavor flavor;
  Precision precision = Precision::F32;
  Tier tier = Tier::Small;
  Operation op = Operation::Sum;
};

struct Grid {
  std::vector<Method> methods = {Method::Direct, Method::TwofoldFast, Method::TwofoldRigorous, Method::Kahan,
                                 Method::WideAccumulator};
  std::vector<Flavor> flavors = {Flavor::sequential()};
  std::vector<Precision> precisions = {Precision::F32, Precision::F64};
  std::vector<Tier> tiers = {Tier::Small, Tier::Medium, Tier::Large};
  std::vector<Operation> ops = {Operation::Sum, Operation::Dot};

  std::vector<Cell> cells() const {
    std::vector<Cell> out;
    for (Method m : methods)
      for (Flavor f : flavors)
        for (Precision p : precisions)
          for (Tier t : tiers)
            for (Operation op : ops) out.push_back({m, f, p, t, op});
    return out;
  }
};

struct KernelReport {
  ReportKind kind = ReportKind::Kernel;
  Operation op = Operation::Sum;
  unsigned channels = 1;  // read baselines only
  Method method = Method::Direct;
  Flavor flavor;
  Precision precision = Precision::F32;
  std::optional<Tier> tier;  // empty for noread
  std::size_t n = 0;            // elements per kernel call
  std::size_t repetitions = 0;  // kernel calls in the best sample
  std::size_t samples = 0;
  double best_seconds = 0;
  double best_elements_per_second = 0;
  double megaflops = 0;
  double checksum = 0;
  std::string timestamp;
};

namespace detail {

inline volatile double g_sink = 0;

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
#if defined(_WIN32)
  gmtime_s(&tm, &now);
#else
  gmtime_r(&now, &tm);
#endif
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Timing {
  std::size_t calls = 0;
  std::size_t samples = 0;
  double best_seconds = 0;
  double checksum = 0;
};

// `call` runs the kernel once and returns a double derived from its result;
// every returned value is written to a volatile sink so it cannot be elided.
template <typename Call>
Timing time_best(Call&& call, const Options& opt) {
  using clock = std::chrono::steady_clock;
  Timing t;
  if (opt.repetitions == 0) return t;
  for (std::size_t i = 0; i < opt.warmup; ++i) g_sink = call();

  auto run = [&](std::size_t calls) {
    const auto t0 = clock::now();
    double last = 0;
    for (std::size_t i = 0; i < calls; ++i) {
      last = call();
      g_sink = last;
    }
    const auto t1 = clock::now();
    t.checksum = last;
    return std::chrono::duration<double>(t1 - t0).count();
  };

  std::size_t calls = 1;
  for (;;) {
    const double s = run(calls);
    if (s >= opt.min_seconds) break;
    const double grow = s > 0 ? 1.25 * opt.min_seconds / s : 16.0;
    calls = std::max(calls * 2, static_cast<std::size_t>(static_cast<double>(calls) * std::min(grow, 1024.0)));
  }

  t.calls = calls;
  t.samples = opt.repetitions;
  t.best_seconds = run(calls);
  for (std::size_t r = 1; r < opt.repetitions; ++r) t.best_seconds = std::min(t.best_seconds, run(calls));
  return t;
}

inline void fill_rates(KernelReport& r, const Timing& t) {
  r.repetitions = t.calls;
  r.samples = t.samples;
  r.best_seconds = t.best_seconds;
  r.checksum = t.checksum;
  if (t.best_seconds > 0) {
    r.best_elements_per_second = static_cast<double>(r.n) * static_cast<double>(t.calls) / t.best_seconds;
    r.megaflops = r.best_elements_per_second / 1e6;
  }
  r.timestamp = utc_timestamp();
}

// Kernels over a register-resident block: the block is loaded once and fed
// to the accumulators `repeats` times, so no memory is read in the loop.
template <Method M, Real T, unsigned K>
SumResult<kernels::detail::acc_t<M, T>> noread_unrolled(const T* block, std::size_t repeats) noexcept {
  using namespace kernels::detail;
  using Acc = acc_t<M, T>;
  std::array<State<M, Acc>, K> st{};
  std::array<Acc, K> y{};
  for (unsigned j = 0; j < K; ++j) y[j] = static_cast<Acc>(block[j]);
  for (std::size_t r = 0; r < repeats; ++r)
    for (unsigned j = 0; j < K; ++j) st[j].add(y[j]);
  return {combine<M, Acc, K>(st), repeats * K};
}

template <Method M, Real T, unsigned W>
SumResult<kernels::detail::acc_t<M, T>> noread_vectorized(const T* block, std::size_t repeats) noexcept {
#if TWOFOLD_HAS_VECTOR_EXTENSIONS
  using namespace kernels::detail;
  using Acc = acc_t<M, T>;
  using Lanes = VecStates<M, Acc, W>;
  constexpr unsigned NW = Lanes::NW;
  std::array<typename Lanes::V, Lanes::G> y;
  for (unsigned g = 0; g < Lanes::G; ++g) y[g] = lanes::convert<Acc, T, NW>(lanes::load<T, NW>(block + g * NW));
  Lanes vst;
  for (std::size_t r = 0; r < repeats; ++r) vst.add_block([&](unsigned off) { return y[off / NW]; });
  return {combine<M, Acc, W>(vst.split()), repeats * W};
#else
  return noread_unrolled<M, T, W>(block, repeats);
#endif
}

template <Method M, Real T>
SumResult<kernels::detail::acc_t<M, T>> noread_sequential(const T* block, std::size_t repeats) noexcept {
  using namespace kernels::detail;
  using Acc = acc_t<M, T>;
  State<M, Acc> st;
  const Acc y = static_cast<Acc>(block[0]);
  for (std::size_t r = 0; r < repeats; ++r) st.add(y);
  return {finish_single<M, Acc>(st), repeats};
}

template <Method M, Real T>
SumResult<double> noread_dispatch(Flavor f, const T* block, std::size_t repeats) {
  auto go = [&]() -> SumResult<kernels::detail::acc_t<M, T>> {
    if (f.kind == Flavor::Kind::Sequential) return noread_sequential<M, T>(block, repeats);
    const bool vec = f.kind == Flavor::Kind::Vectorized;
    switch (f.lanes) {
      case 2: return vec ? noread_vectorized<M, T, 2>(block, repeats) : noread_unrolled<M, T, 2>(block, repeats);
      case 4: return vec ? noread_vectorized<M, T, 4>(block, repeats) : noread_unrolled<M, T, 4>(block, repeats);
      case 8: return vec ? noread_vectorized<M, T, 8>(block, repeats) : noread_unrolled<M, T, 8>(block, repeats);
      case 16:
        return vec ? noread_vectorized<M, T, 16>(block, repeats) : noread_unrolled<M, T, 16>(block, repeats);
    }
    throw std::invalid_argument("invalid flavor " + to_string(f));
  };
  const auto r = go();
  return {{static_cast<double>(r.twofold.value), static_cast<double>(r.twofold.error)}, r.adds_performed};
}

template <Real T>
SumResult<double> noread_run(Method m, Flavor f, const T* block, std::size_t repeats) {
  switch (m) {
    case Method::Direct: return noread_dispatch<Method::Direct, T>(f, block, repeats);
    case Method::TwofoldFast: return noread_dispatch<Method::TwofoldFast, T>(f, block, repeats);
    case Method::TwofoldRigorous: return noread_dispatch<Method::TwofoldRigorous, T>(f, block, repeats);
    case Method::Kahan: return noread_dispatch<Method::Kahan, T>(f, block, repeats);
    case Method::WideAccumulator:
      if constexpr (std::is_same_v<T, float>) return noread_dispatch<Method::WideAccumulator, T>(f, block, repeats);
      throw std::invalid_argument("noread: no hardware wide accumulator for f64 data");
  }
  throw std::invalid_argument("unknown method");
}

// Streaming read with a trivial consuming reduction (bitwise OR over the raw
// bit patterns); eight independent lanes keep it bandwidth bound.
template <typename U>
TWOFOLD_NOINLINE U read1_kernel(const U* a, std::size_t n) noexcept {
  std::array<U, 8> acc{};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (unsigned j = 0; j < 8; ++j) acc[j] |= a[i + j];
  for (; i < n; ++i) acc[0] |= a[i];
  U r = 0;
  for (U v : acc) r |= v;
  return r;
}

template <typename U>
TWOFOLD_NOINLINE U read2_kernel(const U* a, const U* b, std::size_t n) noexcept {
  std::array<U, 8> acc{};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (unsigned j = 0; j < 8; ++j) acc[j] |= a[i + j] | b[i + j];
  for (; i < n; ++i) acc[0] |= a[i] | b[i];
  U r = 0;
  for (U v : acc) r |= v;
  return r;
}

template <Real T>
KernelReport bench_cell(const Cell& c, const Options& opt) {
  KernelReport r;
  r.kind = ReportKind::Kernel;
  r.op = c.op;
  r.method = c.method;
  r.flavor = c.flavor;
  r.precision = c.precision;
  r.tier = c.tier;
  r.n = std::max<std::size_t>(1, opt.tiers.bytes(c.tier) / sizeof(T));
  const std::vector<T> a = generate<T>(GeneratorKind::NumericalRecipes, opt.seed, Interval::Unit, r.n);
  std::vector<T> b;
  if (c.op == Operation::Dot) b = generate<T>(GeneratorKind::NumericalRecipes, opt.seed + 1, Interval::Unit, r.n);
  const std::span<const T> va(a), vb(b);
  const Timing t = time_best(
      [&] {
        const SumResult<double> s =
            c.op == Operation::Sum ? run_flavor(c.method, c.flavor, va) : run_flavor_dot(c.method, c.flavor, va, vb);
        return s.twofold.value + s.twofold.error;
      },
      opt);
  fill_rates(r, t);
  return r;
}

// Sort key following the conventional table layout: kernels by flavor, then
// method (direct, twofold fast, twofold rigorous, Kahan, wide), sum before
// dot; then noread rows; then the read roofs.
inline auto row_key(const KernelReport& r) {
  constexpr std::array<int, 5> method_rank = {0, 4, 1, 2, 3};  // indexed by Method
  return std::make_tuple(static_cast<int>(r.kind), static_cast<int>(r.flavor.kind),
                         method_rank[static_cast<std::size_t>(r.method)], r.flavor.lanes,
                         static_cast<int>(r.op), r.channels, static_cast<int>(r.precision),
                         r.tier ? static_cast<int>(*r.tier) : -1);
}

}  // namespace detail

inline void sort_reports(std::vector<KernelReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const KernelReport& a, const KernelReport& b) { return detail::row_key(a) < detail::row_key(b); });
}

// Pins the calling thread to the CPU it is running on. Returns that CPU, or
// empty where the platform does not support pinning.
inline std::optional<int> pin_to_current_cpu() {
#if defined(__linux__)
  const int cpu = sched_getcpu();
  if (cpu < 0) return std::nullopt;
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(cpu, &set);
  if (sched_setaffinity(0, sizeof(set), &set) != 0) return std::nullopt;
  return cpu;
#else
  return std::nullopt;
#endif
}

inline std::vector<KernelReport> run_bench(const std::vector<Cell>& cells, const Options& opt) {
  std::vector<KernelReport> out;
  if (opt.repetitions == 0) return out;
  for (const Cell& c : cells) {
    if (!is_valid(c.flavor)) throw std::invalid_argument("invalid flavor " + to_string(c.flavor));
    out.push_back(c.precision == Precision::F32 ? detail::bench_cell<float>(c, opt)
                                                : detail::bench_cell<double>(c, opt));
  }
  sort_reports(out);
  return out;
}

inline std::vector<KernelReport> run_bench(const Grid& grid, const Options& opt) {
  return run_bench(grid.cells(), opt);
}

// Empty report when opt.repetitions == 0.
inline std::optional<KernelReport> run_read_baseline(unsigned channels, Tier tier, Precision precision,
                                                     const Options& opt) {
  if (channels != 1 && channels != 2) throw std::invalid_argument("read baseline: channels must be 1 or 2");
  if (opt.repetitions == 0) return std::nullopt;
  KernelReport r;
  r.kind = ReportKind::Read;
  r.op = channels == 1 ? Operation::Sum : Operation::Dot;
  r.channels = channels;
  r.precision = precision;
  r.tier = tier;
  auto go = [&](auto zero) {
    using U = decltype(zero);
    r.n = std::max<std::size_t>(1, opt.tiers.bytes(tier) / sizeof(U));
    LcgStream g(GeneratorKind::Mmix, opt.seed);
    std::vector<U> a(r.n), b(channels == 2 ? r.n : 0);
    for (U& x : a) x = static_cast<U>(g.next_raw());
    for (U& x : b) x = static_cast<U>(g.next_raw());
    const detail::Timing t = detail::time_best(
        [&] {
          const U v = channels == 1 ? detail::read1_kernel(a.data(), r.n) : detail::read2_kernel(a.data(), b.data(), r.n);
          return static_cast<double>(v);
        },
        opt);
    detail::fill_rates(r, t);
  };
  if (precision == Precision::F32)
    go(std::uint32_t{0});
  else
    go(std::uint64_t{0});
  return r;
}

// Compute roof of one method: the kernel on a register-resident block.
inline std::optional<KernelReport> run_noread_baseline(Method m, Flavor f, Precision precision, const Options& opt) {
  if (!is_valid(f)) throw std::invalid_argument("invalid flavor " + to_string(f));
  if (m == Method::WideAccumulator && precision == Precision::F64)
    throw std::invalid_argument("noread: no hardware wide accumulator for f64 data");
  if (opt.repetitions == 0) return std::nullopt;
  KernelReport r;
  r.kind = ReportKind::NoRead;
  r.method = m;
  r.flavor = f;
  r.precision = precision;
  auto go = [&](auto zero) {
    using T = decltype(zero);
    std::array<T, 16> block{};
    LcgStream g(GeneratorKind::NumericalRecipes, opt.seed);
    for (T& x : block) x = g.next<T>(Interval::Unit);
    const std::size_t repeats = opt.noread_block_repeats;
    r.n = repeats * f.lanes;
    const detail::Timing t = detail::time_best(
        [&] {
          const SumResult<double> s = detail::noread_run<T>(m, f, block.data(), repeats);
          return s.twofold.value + s.twofold.error;
        },
        opt);
    detail::fill_rates(r, t);
  };
  if (precision == Precision::F32)
    go(0.0f);
  else
    go(0.0);
  return r;
}

struct Environment {
  TierSizes tiers;
  std::optional<int> pinned_cpu;
  std::size_t repetitions = 0;
  std::size_t warmup = 0;
  double min_seconds = 0;
};

inline std::string describe(const Environment& env) {
  using period = std::chrono::steady_clock::period;
  std::ostringstream os;
  os << "clock=steady_clock(tick=" << report::fmt(static_cast<double>(period::num) / period::den, "%.3g") << "s)"
     << " tiers_bytes=" << env.tiers.small << '/' << env.tiers.medium << '/' << env.tiers.large
     << " best_of=" << env.repetitions << " warmup=" << env.warmup
     << " min_sample_s=" << report::fmt(env.min_seconds, "%g")
     << " unroll_default=f32:" << default_unrolled<float>().lanes << ",f64:" << default_unrolled<double>().lanes
     << " vec_default=f32:" << default_vectorized<float>().lanes << ",f64:" << default_vectorized<double>().lanes
     << " simd=" << lanes::simd_description()
     << " pinned=" << (env.pinned_cpu ? "cpu" + std::to_string(*env.pinned_cpu) : std::string("no"))
     << " compiler=" <<
#if defined(__clang__)
      "clang-" __clang_version__
#elif defined(__GNUC__)
      "gcc-" __VERSION__
#else
      "unknown"
#endif
      ;
  return os.str();
}

inline report::Table reports_table(const std::vector<KernelReport>& reports) {
  report::Table t{{"kind", "op", "method", "flavor", "precision", "tier", "n", "repetitions", "samples",
                   "best_seconds", "elements_per_second", "megaflops", "checksum"},
                  {}};
  for (const KernelReport& r : reports) {
    std::string method = r.kind == ReportKind::Read ? "read" + std::to_string(r.channels)
                                                    : std::string(to_string(r.method));
    t.rows.push_back({std::string(to_string(r.kind)), std::string(to_string(r.op)), method,
                      r.kind == ReportKind::Read ? "-" : to_string(r.flavor), std::string(to_string(r.precision)),
                      r.tier ? std::string(to_string(*r.tier)) : "-", std::to_string(r.n),
                      std::to_string(r.repetitions), std::to_string(r.samples), report::fmt(r.best_seconds, "%.6g"),
                      report::fmt(r.best_elements_per_second, "%.6g"), report::fmt(r.megaflops, "%.6g"),
                      report::fmt(r.checksum, "%.17g")});
  }
  return t;
}

// Report-level ordering properties. Violations are findings to flag, not
// failures: shared hardware makes timing noisy.
struct Finding {
  std::string property;
  bool holds = true;
  std::string detail;
};

inline std::vector<Finding> check_orderings(const std::vector<KernelReport>& reports, double noise = 0.10) {
  std::vector<Finding> out;
  auto same_cell = [](const KernelReport& a, const KernelReport& b) {
    return a.kind == b.kind && a.op == b.op && a.flavor == b.flavor && a.precision == b.precision && a.tier == b.tier;
  };
  for (const KernelReport& rig : reports) {
    if (rig.method != Method::TwofoldRigorous || rig.kind == ReportKind::Read) continue;
    for (const KernelReport& fast : reports) {
      if (fast.method != Method::TwofoldFast || !same_cell(rig, fast)) continue;
      const bool ok = rig.megaflops <= fast.megaflops * (1 + noise);
      std::ostringstream d;
      d << to_string(rig.kind) << ' ' << to_string(rig.op) << ' ' << to_string(rig.flavor) << ' '
        << to_string(rig.precision) << ' ' << (rig.tier ? to_string(*rig.tier) : "-") << ": rigorous "
        << report::fmt(rig.megaflops, "%.1f") << " vs fast " << report::fmt(fast.megaflops, "%.1f") << " Mflops";
      out.push_back({"twofold-rigorous <= twofold-fast", ok, d.str()});
    }
  }
  return out;
}

}  // namespace twofold::bench
