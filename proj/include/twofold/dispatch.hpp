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

// Runtime selection of method and flavor. Results are widened to binary64,
// which is exact for binary32 value/error pairs.

#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "twofold/kernels.hpp"
#include "twofold/oracle.hpp"

namespace twofold {

enum class Precision { F32, F64 };

constexpr std::string_view to_string(Precision p) noexcept {
  return p == Precision::F32 ? "f32" : "f64";
}

inline std::optional<Precision> parse_precision(std::string_view s) noexcept {
  if (s == "f32") return Precision::F32;
  if (s == "f64") return Precision::F64;
  return std::nullopt;
}

template <Real T>
constexpr Precision precision_of() noexcept {
  return sizeof(T) == 4 ? Precision::F32 : Precision::F64;
}

template <Real T>
constexpr SumResult<double> widen(const SumResult<T>& r) noexcept {
  return {{static_cast<double>(r.twofold.value), static_cast<double>(r.twofold.error)},
          r.adds_performed};
}

namespace detail {

// The wide accumulator for binary64 data is the exact oracle; the pair
// reported is the correctly rounded sum and the rounded remainder.
inline SumResult<double> oracle_as_result(const Expansion& e, std::size_t n) {
  const double value = e.rounded();
  const double error = e.plus(-value).rounded();
  return {{value, error}, n};
}

}  // namespace detail

template <Real T>
SumResult<double> run_flavor(Method m, Flavor f, std::span<const T> data) {
  switch (m) {
    case Method::Direct: return widen(sum_direct<T>(data, f));
    case Method::TwofoldFast: return widen(sum_twofold_fast<T>(data, f));
    case Method::TwofoldRigorous: return widen(sum_twofold_rigorous<T>(data, f));
    case Method::Kahan: return widen(sum_kahan<T>(data, f));
    case Method::WideAccumulator:
      if constexpr (std::is_same_v<T, float>) {
        return sum_wide(data, f);
      } else {
        kernels::detail::check_flavor(f);
        return detail::oracle_as_result(exact_sum(data), data.size());
      }
  }
  throw std::invalid_argument("unknown method");
}

template <Real T>
SumResult<double> run_flavor_dot(Method m, Flavor f, std::span<const T> a, std::span<const T> b) {
  switch (m) {
    case Method::Direct: return widen(dot_direct<T>(a, b, f));
    case Method::TwofoldFast: return widen(dot_twofold_fast<T>(a, b, f));
    case Method::TwofoldRigorous: return widen(dot_twofold_rigorous<T>(a, b, f));
    case Method::Kahan: return widen(dot_kahan<T>(a, b, f));
    case Method::WideAccumulator:
      if constexpr (std::is_same_v<T, float>) {
        return dot_wide(a, b, f);
      } else {
        kernels::detail::check_flavor(f);
        return detail::oracle_as_result(exact_dot(a, b), a.size());
      }
  }
  throw std::invalid_argument("unknown method");
}

// The number a method reports as its answer: value + error for the twofold
// methods (taken exactly), value otherwise.
inline std::optional<double> score(Method m, const SumResult<double>& r, const Expansion& reference) {
  if (is_twofold(m)) return relative_error(r.twofold, reference);
  return relative_error(r.twofold.value, reference);
}

}  // namespace twofold
