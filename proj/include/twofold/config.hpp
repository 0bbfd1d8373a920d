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

// Floating-point environment requirements shared by every twofold header.
//
// Error-free transformations only work when each + and - is a single IEEE-754
// operation rounded to nearest, ties to even, and when the compiler neither
// reassociates nor contracts them. Value-unsafe builds are rejected here;
// the runtime canary in selftest.hpp catches anything that slips through.

#pragma once

#include <cfloat>
#include <limits>
#include <type_traits>

#if defined(__FAST_MATH__) && !defined(TWOFOLD_ALLOW_UNSAFE_MATH)
#error "twofold requires value-safe floating point: remove -ffast-math / -Ofast"
#endif

#if defined(FLT_EVAL_METHOD) && FLT_EVAL_METHOD != 0 && !defined(TWOFOLD_ALLOW_UNSAFE_MATH)
#error "twofold requires FLT_EVAL_METHOD == 0 (no excess precision, e.g. x87)"
#endif

static_assert(std::numeric_limits<float>::is_iec559, "binary32 float required");
static_assert(std::numeric_limits<double>::is_iec559, "binary64 double required");
static_assert(std::numeric_limits<float>::digits == 24);
static_assert(std::numeric_limits<double>::digits == 53);

#if defined(__GNUC__) || defined(__clang__)
#define TWOFOLD_HAS_VECTOR_EXTENSIONS 1
#define TWOFOLD_NOINLINE __attribute__((noinline))
#else
#define TWOFOLD_HAS_VECTOR_EXTENSIONS 0
#define TWOFOLD_NOINLINE
#endif

namespace twofold {

template <typename T>
concept Real = std::is_same_v<T, float> || std::is_same_v<T, double>;

// Unit roundoff: half an ulp of 1.
template <Real T>
inline constexpr T unit_roundoff = std::numeric_limits<T>::epsilon() / 2;

}  // namespace twofold
