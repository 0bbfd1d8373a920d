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

// Runtime checks of the rounding environment.
//
// The canary evaluates identities that value-unsafe compilation (fast-math,
// reassociation, x87 excess precision) breaks: with reassociation the
// compiler folds (a + b) - a into b and the recovered round-off becomes 0.
// Operands go through volatile storage so nothing is constant-folded.

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "twofold/eft.hpp"
#include "twofold/kernels.hpp"
#include "twofold/rng.hpp"

namespace twofold::selftest {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Result {
  std::vector<Check> checks;
  bool passed() const noexcept {
    for (const Check& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

namespace detail {

template <Real T>
T opaque(T x) noexcept {
  volatile T v = x;
  return v;
}

__extension__ typedef __int128 int128;

// x * 2^k as a signed 128-bit integer, where x = mant * 2^exp exactly.
struct Scaled {
  int128 mant = 0;
  int exp = 0;
};

inline Scaled decompose(double x) noexcept {
  if (x == 0) return {};
  int e = 0;
  const double m = std::frexp(x, &e);
  return {static_cast<int128>(std::ldexp(m, 53)), e - 53};
}

// a + b == x + y, checked in integer arithmetic. Valid when the exponent
// spread of the four operands stays below ~70 bits.
inline bool integer_identity(double a, double b, double x, double y) noexcept {
  const Scaled s[4] = {decompose(a), decompose(b), decompose(x), decompose(y)};
  int emin = 1 << 20;
  for (const Scaled& v : s)
    if (v.mant != 0 && v.exp < emin) emin = v.exp;
  int128 n[4];
  for (int i = 0; i < 4; ++i) n[i] = s[i].mant == 0 ? 0 : s[i].mant * (static_cast<int128>(1) << (s[i].exp - emin));
  return n[0] + n[1] == n[2] + n[3];
}

// Random value with exponent uniform in [lo, hi] and random sign.
template <Real T>
T random_scaled(LcgStream& g, int lo, int hi) noexcept {
  const T m = T{1} + g.next<T>(Interval::Unit);
  const int e = lo + static_cast<int>(g.next_raw() % static_cast<std::uint64_t>(hi - lo + 1));
  const T v = std::ldexp(m, e);
  return (g.next_raw() >> 63) ? -v : v;
}

}  // namespace detail

inline Check fast_math_canary() {
  const double a = detail::opaque(1.0);
  const double b = detail::opaque(std::ldexp(1.0, -53));
  const Twofold<double> f = fast_two_sum(a, b);
  const Twofold<double> k = two_sum(b, a);
  const float af = detail::opaque(1.0f);
  const float bf = detail::opaque(std::ldexp(1.0f, -24));
  const Twofold<float> ff = fast_two_sum(af, bf);
  const bool ok = f.value == 1.0 && f.error == b && k.value == 1.0 && k.error == b && ff.error == bf;
  return {"fast-math canary", ok,
          ok ? "fast_two_sum(1, 2^-53).error == 2^-53"
             : "round-off not recovered: the build reassociates or contracts floating-point expressions"};
}

inline Check kernel_canary() {
  const double tiny = detail::opaque(std::ldexp(1.0, -53));
  const std::vector<double> x = {detail::opaque(1.0), tiny, tiny};
  const Twofold<double> fast = sum_twofold_fast(x).twofold;
  const Twofold<double> rig = sum_twofold_rigorous(x).twofold;
  const double expect = std::ldexp(1.0, -52);
  const bool ok = fast.value == 1.0 && fast.error == expect && rig.value == 1.0 && rig.error == expect;
  return {"kernel canary", ok, ok ? "twofold kernels recover 2^-52 from [1, 2^-53, 2^-53]" : "kernel round-off lost"};
}

// fast_two_sum / two_sum exactness on random binary32 pairs (checked by
// widening to binary64, where the sums are exact) and binary64 pairs
// (checked in 128-bit integer arithmetic).
inline Check eft_exactness(std::size_t pairs, std::uint64_t seed = 1) {
  LcgStream g(GeneratorKind::Mmix, seed);
  std::size_t failures = 0;
  for (std::size_t i = 0; i < pairs; ++i) {
    float a = detail::random_scaled<float>(g, -20, 20);
    float b = detail::random_scaled<float>(g, -20, 20);
    const Twofold<float> k = two_sum(a, b);
    if (double(k.value) + double(k.error) != double(a) + double(b) || k.value != a + b) ++failures;
    if (std::fabs(a) < std::fabs(b)) std::swap(a, b);
    const Twofold<float> d = fast_two_sum(a, b);
    if (double(d.value) + double(d.error) != double(a) + double(b) || !(d == two_sum(a, b))) ++failures;
  }
  for (std::size_t i = 0; i < pairs; ++i) {
    double a = detail::random_scaled<double>(g, -20, 20);
    double b = detail::random_scaled<double>(g, -20, 20);
    const Twofold<double> k = two_sum(a, b);
    if (!detail::integer_identity(a, b, k.value, k.error) || k.value != a + b) ++failures;
    if (std::fabs(a) < std::fabs(b)) std::swap(a, b);
    const Twofold<double> d = fast_two_sum(a, b);
    if (!detail::integer_identity(a, b, d.value, d.error) || !(d == two_sum(a, b))) ++failures;
  }
  return {"eft exactness", failures == 0,
          std::to_string(pairs) + " f32 + " + std::to_string(pairs) + " f64 pairs, " + std::to_string(failures) +
              " failures"};
}

inline Result run(std::size_t pairs = 100'000) {
  Result r;
  r.checks.push_back(fast_math_canary());
  r.checks.push_back(kernel_canary());
  r.checks.push_back(eft_exactness(pairs));
  return r;
}

}  // namespace twofold::selftest
