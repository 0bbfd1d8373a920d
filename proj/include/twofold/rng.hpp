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

// Linear congruential generators for reproducible test data.
//
//   NumericalRecipes  s' = 1664525 s + 1013904223                    mod 2^32
//   Mmix              s' = 6364136223846793005 s + 1442695040888963407 mod 2^64
//
// Generator state is a plain value: next_raw returns the output and the
// advanced state. LcgStream wraps that for loops.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "twofold/config.hpp"

namespace twofold {

enum class GeneratorKind { NumericalRecipes, Mmix };

constexpr std::string_view to_string(GeneratorKind k) noexcept {
  return k == GeneratorKind::NumericalRecipes ? "nr" : "mmix";
}

inline std::optional<GeneratorKind> parse_generator(std::string_view s) noexcept {
  if (s == "nr") return GeneratorKind::NumericalRecipes;
  if (s == "mmix") return GeneratorKind::Mmix;
  return std::nullopt;
}

// Target interval of generated data: [0,1) or [-1,1).
enum class Interval { Unit, Symmetric };

constexpr std::string_view to_string(Interval i) noexcept {
  return i == Interval::Unit ? "unit" : "sym";
}

inline std::optional<Interval> parse_interval(std::string_view s) noexcept {
  if (s == "unit") return Interval::Unit;
  if (s == "sym") return Interval::Symmetric;
  return std::nullopt;
}

struct LcgState {
  GeneratorKind kind = GeneratorKind::NumericalRecipes;
  std::uint64_t state = 0;

  static constexpr LcgState seeded(GeneratorKind kind, std::uint64_t seed) noexcept {
    return {kind, kind == GeneratorKind::NumericalRecipes ? (seed & 0xffffffffu) : seed};
  }

  constexpr unsigned width() const noexcept {
    return kind == GeneratorKind::NumericalRecipes ? 32 : 64;
  }

  friend constexpr bool operator==(const LcgState&, const LcgState&) = default;
};

constexpr std::pair<std::uint64_t, LcgState> next_raw(LcgState g) noexcept {
  std::uint64_t s = 0;
  if (g.kind == GeneratorKind::NumericalRecipes) {
    const std::uint32_t s32 = static_cast<std::uint32_t>(g.state);
    s = static_cast<std::uint32_t>(1664525u * s32 + 1013904223u);
  } else {
    s = 6364136223846793005ull * g.state + 1442695040888963407ull;
  }
  return {s, LcgState{g.kind, s}};
}

// raw / 2^width, truncated to the precision of T so the result stays below 1:
// the top digits<T> bits of raw become the significand, which is exact.
template <Real T>
constexpr T raw_to_unit(std::uint64_t raw, unsigned width) noexcept {
  constexpr unsigned digits = std::numeric_limits<T>::digits;
  const unsigned bits = width < digits ? width : digits;
  const std::uint64_t top = raw >> (width - bits);
  T scale = 1;
  for (unsigned i = 0; i < bits; ++i) scale = scale / 2;
  return static_cast<T>(top) * scale;
}

template <Real T>
constexpr T raw_to_symmetric(std::uint64_t raw, unsigned width) noexcept {
  const T u = raw_to_unit<T>(raw, width);
  return T{2} * u - T{1};
}

template <Real T>
constexpr std::pair<T, LcgState> uniform01(LcgState g) noexcept {
  const auto [raw, next] = next_raw(g);
  return {raw_to_unit<T>(raw, g.width()), next};
}

template <Real T>
constexpr std::pair<T, LcgState> uniform_sym(LcgState g) noexcept {
  const auto [raw, next] = next_raw(g);
  return {raw_to_symmetric<T>(raw, g.width()), next};
}

class LcgStream {
 public:
  constexpr LcgStream(GeneratorKind kind, std::uint64_t seed) noexcept
      : state_(LcgState::seeded(kind, seed)) {}
  constexpr explicit LcgStream(LcgState state) noexcept : state_(state) {}

  constexpr std::uint64_t next_raw() noexcept {
    const auto [raw, next] = twofold::next_raw(state_);
    state_ = next;
    return raw;
  }

  template <Real T>
  constexpr T next(Interval interval) noexcept {
    const std::uint64_t raw = next_raw();
    return interval == Interval::Unit ? raw_to_unit<T>(raw, state_.width())
                                      : raw_to_symmetric<T>(raw, state_.width());
  }

  constexpr LcgState state() const noexcept { return state_; }

 private:
  LcgState state_;
};

template <Real T>
std::vector<T> generate(GeneratorKind kind, std::uint64_t seed, Interval interval, std::size_t n) {
  LcgStream g(kind, seed);
  std::vector<T> out(n);
  for (T& x : out) x = g.next<T>(interval);
  return out;
}

}  // namespace twofold
