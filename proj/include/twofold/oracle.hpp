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

// Exact reference sums via non-overlapping floating-point expansions.
//
// An Expansion is a list of binary64 components, ordered by increasing
// magnitude, pairwise non-overlapping, none of them zero. Their exact real
// sum is the represented value. Growing an expansion by one double cascades
// two_sum through the components, so every sum below is exact as long as no
// component overflows.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "twofold/config.hpp"
#include "twofold/eft.hpp"

namespace twofold {

class Expansion {
 public:
  Expansion() = default;

  // Builds an expansion from arbitrary doubles by exact accumulation.
  static Expansion from_terms(std::span<const double> terms) {
    Expansion e;
    for (double t : terms) e.add(t);
    return e;
  }

  std::span<const double> components() const noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }
  bool is_zero() const noexcept { return components_.empty(); }

  // -1, 0 or +1; the largest component carries the sign.
  int sign() const noexcept {
    if (components_.empty()) return 0;
    return components_.back() > 0 ? 1 : -1;
  }

  // Exact in-place growth: *this += v. Throws std::overflow_error when a
  // component leaves the finite range.
  void add(double v) {
    if (!std::isfinite(v)) throw std::overflow_error("expansion: non-finite addend");
    if (v == 0) return;
    double q = v;
    std::size_t out = 0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      const Twofold<double> r = two_sum(q, components_[i]);
      q = r.value;
      if (r.error != 0) components_[out++] = r.error;
    }
    if (!std::isfinite(q)) throw std::overflow_error("expansion: component overflow");
    components_.resize(out);
    if (q != 0) components_.push_back(q);
  }

  void add(const Expansion& other) {
    for (double c : other.components_) add(c);
  }

  [[nodiscard]] Expansion plus(double v) const {
    Expansion r = *this;
    r.add(v);
    return r;
  }

  [[nodiscard]] Expansion negated() const {
    Expansion r = *this;
    for (double& c : r.components_) c = -c;
    return r;
  }

  // Approximate value: components summed from smallest to largest.
  double estimate() const noexcept {
    double s = 0;
    for (double c : components_) s = s + c;
    return s;
  }

  // The represented real rounded to nearest binary64, ties to even.
  double rounded() const {
    double guess = estimate();
    for (;;) {
      const Expansion residual = plus(-guess);
      const int dir = residual.sign();
      if (dir == 0) return guess;
      const double next = std::nextafter(guess, dir > 0 ? std::numeric_limits<double>::infinity()
                                                        : -std::numeric_limits<double>::infinity());
      // Compare 2|residual| with the gap |next - guess| without halving it.
      Expansion twice = residual;
      twice.add(residual);
      twice.add(-(next - guess));
      const int cmp = twice.sign() * dir;
      if (cmp < 0) return guess;
      if (cmp == 0) return is_even(guess) ? guess : next;
      guess = next;
    }
  }

  // Greedy decomposition into correctly rounded pieces; the result is unique
  // for a given real, so two expansions represent the same value iff their
  // canonical forms are equal.
  [[nodiscard]] Expansion canonical() const {
    Expansion rest = *this;
    std::vector<double> pieces;
    while (!rest.is_zero()) {
      const double r = rest.rounded();
      pieces.push_back(r);
      rest.add(-r);
    }
    Expansion out;
    out.components_.assign(pieces.rbegin(), pieces.rend());
    return out;
  }

  friend bool operator==(const Expansion&, const Expansion&) = default;

 private:
  // Lowest significand bit, valid for normal and subnormal values alike.
  static bool is_even(double x) noexcept { return (std::bit_cast<std::uint64_t>(x) & 1u) == 0; }

  std::vector<double> components_;
};

// Exact x + v, leaving x untouched.
inline Expansion expansion_add(const Expansion& e, double v) { return e.plus(v); }

template <Real T>
Expansion exact_sum(std::span<const T> data) {
  Expansion e;
  for (T x : data) e.add(static_cast<double>(x));
  return e;
}

template <Real T>
Expansion exact_sum(const std::vector<T>& data) {
  return exact_sum(std::span<const T>(data));
}

// binary32 products are exact in binary64, so this is the exact dot product.
inline Expansion exact_dot(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw std::invalid_argument("exact_dot: arrays differ in length");
  Expansion e;
  for (std::size_t i = 0; i < a.size(); ++i)
    e.add(static_cast<double>(a[i]) * static_cast<double>(b[i]));
  return e;
}

// binary64: exact sum of the once-rounded products a[i]*b[i], i.e. of the
// same addends the dot kernels accumulate. Product round-off is not included.
inline Expansion exact_dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("exact_dot: arrays differ in length");
  Expansion e;
  for (std::size_t i = 0; i < a.size(); ++i) e.add(a[i] * b[i]);
  return e;
}

// (approx - reference) / reference. The difference is formed exactly, so the
// result carries full binary64 relative accuracy even far below one ulp.
// Empty when the reference is zero.
inline std::optional<double> relative_error(const Expansion& approx, const Expansion& reference) {
  if (reference.is_zero()) return std::nullopt;
  Expansion diff = approx;
  diff.add(reference.negated());
  return diff.estimate() / reference.estimate();
}

inline std::optional<double> relative_error(double approx, const Expansion& reference) {
  return relative_error(Expansion().plus(approx), reference);
}

// A twofold result is scored on value + error, taken exactly.
template <Real T>
std::optional<double> relative_error(const Twofold<T>& approx, const Expansion& reference) {
  Expansion a;
  a.add(static_cast<double>(approx.value));
  a.add(static_cast<double>(approx.error));
  return relative_error(a, reference);
}

}  // namespace twofold
