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

// Portable fixed-width SIMD lanes built on the GCC/Clang vector extension.
// Lane arithmetic is elementwise IEEE arithmetic, so the EFT identities hold
// per lane exactly as they do for scalars.

#pragma once

#include <cstddef>
#include <cstring>

#include "twofold/config.hpp"

namespace twofold::lanes {

#if TWOFOLD_HAS_VECTOR_EXTENSIONS

template <typename T, unsigned W>
struct VecOf {
  typedef T type __attribute__((vector_size(sizeof(T) * W)));
};

template <typename T, unsigned W>
using Vec = typename VecOf<T, W>::type;

template <typename T, unsigned W>
inline Vec<T, W> load(const T* p) noexcept {
  Vec<T, W> v;
  std::memcpy(&v, p, sizeof(v));
  return v;
}

template <typename T, unsigned W>
inline Vec<T, W> broadcast(T x) noexcept {
  Vec<T, W> v;
  for (unsigned i = 0; i < W; ++i) v[i] = x;
  return v;
}

template <typename To, typename From, unsigned W>
inline Vec<To, W> convert(Vec<From, W> v) noexcept {
  if constexpr (std::is_same_v<To, From>) {
    return v;
  } else {
    return __builtin_convertvector(v, Vec<To, W>);
  }
}

#endif

// Preferred lane count for T on the compilation target (one native register).
template <Real T>
constexpr unsigned native_width() noexcept {
#if defined(__AVX512F__)
  constexpr std::size_t bytes = 64;
#elif defined(__AVX__)
  constexpr std::size_t bytes = 32;
#else
  constexpr std::size_t bytes = 16;
#endif
  constexpr std::size_t w = bytes / sizeof(T);
  return w < 2 ? 2u : (w > 16 ? 16u : static_cast<unsigned>(w));
}

constexpr const char* simd_description() noexcept {
#if !TWOFOLD_HAS_VECTOR_EXTENSIONS
  return "scalar-fallback";
#elif defined(__AVX512F__)
  return "avx512";
#elif defined(__AVX__)
  return "avx";
#elif defined(__SSE2__)
  return "sse2";
#elif defined(__ARM_NEON)
  return "neon";
#else
  return "generic-vector";
#endif
}

}  // namespace twofold::lanes
