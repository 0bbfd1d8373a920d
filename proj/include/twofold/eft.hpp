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

// Error-free transformations for addition and the Twofold value+error pair.

#pragma once

#include <cassert>
#include <cmath>
#include <type_traits>

#include "twofold/config.hpp"

namespace twofold {

// A real number approximated by value + error, both of the same precision.
// For the outputs of fast_two_sum / two_sum the pair is exact; for summation
// kernels `error` estimates (exact - value).
template <Real T>
struct Twofold {
  T value{0};
  T error{0};

  friend constexpr bool operator==(const Twofold&, const Twofold&) = default;
};

// Dekker: x = fl(a+b), x + y == a + b exactly. Requires |a| >= |b| (or a == 0).
template <Real T>
[[nodiscard]] constexpr Twofold<T> fast_two_sum(T a, T b) noexcept {
  assert(!(std::isfinite(a) && std::isfinite(b)) || a == 0 ||
         std::fabs(a) >= std::fabs(b));
  const T x = a + b;
  const T b_virtual = x - a;
  const T y = b - b_virtual;
  return {x, y};
}

// Knuth: x = fl(a+b), x + y == a + b exactly, for any operand order.
template <Real T>
[[nodiscard]] constexpr Twofold<T> two_sum(T a, T b) noexcept {
  const T x = a + b;
  const T b_virtual = x - a;
  const T a_virtual = x - b_virtual;
  const T b_roundoff = b - b_virtual;
  const T a_roundoff = a - a_virtual;
  const T y = a_roundoff + b_roundoff;
  return {x, y};
}

// Non-finite value field means the originating sum overflowed or was fed
// non-finite data.
template <Real T>
[[nodiscard]] constexpr bool is_range_failure(const Twofold<T>& t) noexcept {
  return !std::isfinite(t.value) || !std::isfinite(t.error);
}

}  // namespace twofold
