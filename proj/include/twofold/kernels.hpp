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

// Summation and dot-product kernels.
//
// Five methods (direct, wide accumulator, twofold fast, twofold rigorous,
// Kahan) in three execution flavors:
//
//   Sequential     one accumulator, the reference semantics.
//   Unrolled(k)    k scalar accumulators; element i goes to accumulator i % k.
//   Vectorized(w)  w SIMD lanes with the same element-to-lane assignment.
//
// Unrolled(k) and Vectorized(k) perform identical per-lane operations, so
// their results agree bitwise. Lanes are merged at the end; for the twofold
// methods the merge uses two_sum and folds its round-off into the error.
//
// Dot products feed a[i]*b[i], rounded to the data precision, into the same
// accumulators. Multiplication round-off is not tracked.
//
// Flop accounting: every result reports adds_performed == N, one add per
// element, regardless of how many additions the method executes.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twofold/config.hpp"
#include "twofold/eft.hpp"
#include "twofold/lanes.hpp"

namespace twofold {

enum class Method { Direct, WideAccumulator, TwofoldFast, TwofoldRigorous, Kahan };

inline constexpr std::array<Method, 5> kAllMethods = {
    Method::Direct, Method::WideAccumulator, Method::TwofoldFast,
    Method::TwofoldRigorous, Method::Kahan};

constexpr std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::Direct: return "direct";
    case Method::WideAccumulator: return "wide";
    case Method::TwofoldFast: return "twofold-fast";
    case Method::TwofoldRigorous: return "twofold-rigorous";
    case Method::Kahan: return "kahan";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view s) noexcept {
  for (Method m : kAllMethods)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

constexpr bool is_twofold(Method m) noexcept {
  return m == Method::TwofoldFast || m == Method::TwofoldRigorous;
}

struct Flavor {
  enum class Kind { Sequential, Unrolled, Vectorized };

  Kind kind = Kind::Sequential;
  unsigned lanes = 1;

  static constexpr Flavor sequential() noexcept { return {}; }
  static constexpr Flavor unrolled(unsigned k) noexcept { return {Kind::Unrolled, k}; }
  static constexpr Flavor vectorized(unsigned w) noexcept { return {Kind::Vectorized, w}; }

  friend constexpr bool operator==(const Flavor&, const Flavor&) = default;
};

constexpr bool is_valid(Flavor f) noexcept {
  if (f.kind == Flavor::Kind::Sequential) return f.lanes == 1;
  return f.lanes == 2 || f.lanes == 4 || f.lanes == 8 || f.lanes == 16;
}

inline std::string to_string(Flavor f) {
  switch (f.kind) {
    case Flavor::Kind::Sequential: return "seq";
    case Flavor::Kind::Unrolled: return "unroll:" + std::to_string(f.lanes);
    case Flavor::Kind::Vectorized: return "vec:" + std::to_string(f.lanes);
  }
  return "?";
}

// Accepts "seq", "unroll", "unroll:k", "vec", "vec:w". Bare "unroll"/"vec"
// resolve to the per-precision defaults, so they need the data type.
template <Real T>
constexpr Flavor default_unrolled() noexcept {
  return Flavor::unrolled(sizeof(T) == 4 ? 8 : 4);
}

template <Real T>
constexpr Flavor default_vectorized() noexcept {
  return Flavor::vectorized(lanes::native_width<T>());
}

template <Real T>
std::optional<Flavor> parse_flavor(std::string_view s) {
  auto lanes_of = [](std::string_view digits) -> std::optional<unsigned> {
    if (digits.empty() || digits.size() > 2) return std::nullopt;
    unsigned v = 0;
    for (char c : digits) {
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + static_cast<unsigned>(c - '0');
    }
    return v;
  };
  std::optional<Flavor> f;
  if (s == "seq") {
    f = Flavor::sequential();
  } else if (s == "unroll") {
    f = default_unrolled<T>();
  } else if (s == "vec") {
    f = default_vectorized<T>();
  } else if (s.starts_with("unroll:")) {
    if (auto k = lanes_of(s.substr(7))) f = Flavor::unrolled(*k);
  } else if (s.starts_with("vec:")) {
    if (auto w = lanes_of(s.substr(4))) f = Flavor::vectorized(*w);
  }
  if (f && !is_valid(*f)) return std::nullopt;
  return f;
}

template <Real T>
struct SumResult {
  Twofold<T> twofold;
  std::size_t adds_performed = 0;

  friend constexpr bool operator==(const SumResult&, const SumResult&) = default;
};

namespace kernels::detail {

// Accumulator states. A is either a scalar or a lane vector; every method
// body is written exactly once and instantiated for both.

template <typename A>
struct DirectState {
  A s{};
  void add(A y) noexcept { s = s + y; }
};

template <typename A>
struct KahanState {
  A s{};
  A c{};
  void add(A x) noexcept {
    const A y = x - c;
    const A t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

template <typename A>
struct FastState {
  A s{};
  A e{};
  void add(A y) noexcept {
    const A t = s + y;
    const A c = (t - s) - y;
    e = e - c;
    s = t;
  }
};

template <typename A>
struct RigorousState {
  A s{};
  A e{};
  void add(A y) noexcept {
    const A t = s + y;
    const A yt = t - s;
    const A dy = y - yt;
    const A ds = s - (t - yt);
    e = e + (ds + dy);
    s = t;
  }
};

template <Method M> struct StateFor;
template <> struct StateFor<Method::Direct> { template <typename A> using type = DirectState<A>; };
template <> struct StateFor<Method::WideAccumulator> { template <typename A> using type = DirectState<A>; };
template <> struct StateFor<Method::TwofoldFast> { template <typename A> using type = FastState<A>; };
template <> struct StateFor<Method::TwofoldRigorous> { template <typename A> using type = RigorousState<A>; };
template <> struct StateFor<Method::Kahan> { template <typename A> using type = KahanState<A>; };

template <Method M, typename A>
using State = typename StateFor<M>::template type<A>;

// Accumulator precision of method M over data of type T.
template <Method M, Real T>
using acc_t = std::conditional_t<M == Method::WideAccumulator, double, T>;

template <Method M, Real Acc>
Twofold<Acc> finish_single(const State<M, Acc>& st) noexcept {
  if constexpr (M == Method::TwofoldFast || M == Method::TwofoldRigorous) {
    return {st.s, st.e};
  } else {
    return {st.s, Acc{0}};
  }
}

// Merge K scalar lane states into one result.
template <Method M, Real Acc, std::size_t K>
Twofold<Acc> combine(const std::array<State<M, Acc>, K>& st) noexcept {
  if constexpr (M == Method::TwofoldFast || M == Method::TwofoldRigorous) {
    Acc value = st[0].s;
    Acc roundoff = 0;
    for (std::size_t i = 1; i < K; ++i) {
      const Twofold<Acc> merged = two_sum(value, st[i].s);
      value = merged.value;
      roundoff = roundoff + merged.error;
    }
    Acc error = roundoff;
    for (std::size_t i = 0; i < K; ++i) error = error + st[i].e;
    return {value, error};
  } else if constexpr (M == Method::Kahan) {
    KahanState<Acc> total;
    for (std::size_t i = 0; i < K; ++i) total.add(st[i].s);
    for (std::size_t i = 0; i < K; ++i) total.add(-st[i].c);
    return {total.s, Acc{0}};
  } else {
    Acc value = st[0].s;
    for (std::size_t i = 1; i < K; ++i) value = value + st[i].s;
    return {value, Acc{0}};
  }
}

// Load(i) yields element i of the addend sequence in the data precision.
template <Method M, Real T, typename Load>
SumResult<acc_t<M, T>> run_sequential(std::size_t n, Load load) noexcept {
  using Acc = acc_t<M, T>;
  State<M, Acc> st;
  for (std::size_t i = 0; i < n; ++i) st.add(static_cast<Acc>(load(i)));
  return {finish_single<M, Acc>(st), n};
}

template <Method M, Real T, unsigned K, typename Load>
SumResult<acc_t<M, T>> run_unrolled(std::size_t n, Load load) noexcept {
  using Acc = acc_t<M, T>;
  std::array<State<M, Acc>, K> st{};
  std::size_t i = 0;
  for (; i + K <= n; i += K)
    for (unsigned j = 0; j < K; ++j) st[j].add(static_cast<Acc>(load(i + j)));
  for (unsigned j = 0; i + j < n; ++j) st[j].add(static_cast<Acc>(load(i + j)));
  return {combine<M, Acc, K>(st), n};
}

#if TWOFOLD_HAS_VECTOR_EXTENSIONS

// W lanes held as W / NW native registers of NW lanes each. A generic vector
// wider than the hardware register would be kept on the stack by the
// compiler; an array of register-sized states stays in registers. Lane
// g * NW + j is lane j of register g, so element i still lands in lane i % W.
template <Method M, Real Acc, unsigned W>
struct VecStates {
  static constexpr unsigned NW = lanes::native_width<Acc>() < W ? lanes::native_width<Acc>() : W;
  static constexpr unsigned G = W / NW;
  using V = lanes::Vec<Acc, NW>;

  std::array<State<M, V>, G> reg{};

  // chunk(offset) yields lanes [offset, offset + NW) of one W-wide block.
  template <typename Chunk>
  void add_block(Chunk&& chunk) noexcept {
    for (unsigned g = 0; g < G; ++g) reg[g].add(chunk(g * NW));
  }

  std::array<State<M, Acc>, W> split() const noexcept {
    std::array<State<M, Acc>, W> st{};
    for (unsigned g = 0; g < G; ++g)
      for (unsigned j = 0; j < NW; ++j) {
        State<M, Acc>& lane = st[g * NW + j];
        lane.s = reg[g].s[j];
        if constexpr (M == Method::TwofoldFast || M == Method::TwofoldRigorous) lane.e = reg[g].e[j];
        if constexpr (M == Method::Kahan) lane.c = reg[g].c[j];
      }
    return st;
  }
};

// LoadVec<NW>(i) yields elements [i, i+NW) as a Vec<T, NW>; Load(i) a scalar.
template <Method M, Real T, unsigned W, typename LoadVec, typename Load>
SumResult<acc_t<M, T>> run_vectorized(std::size_t n, LoadVec load_vec, Load load) noexcept {
  using Acc = acc_t<M, T>;
  using Lanes = VecStates<M, Acc, W>;
  constexpr unsigned NW = Lanes::NW;
  Lanes vst;
  std::size_t i = 0;
  for (; i + W <= n; i += W)
    vst.add_block([&](unsigned off) { return lanes::convert<Acc, T, NW>(load_vec.template operator()<NW>(i + off)); });
  auto st = vst.split();
  for (unsigned j = 0; i + j < n; ++j) st[j].add(static_cast<Acc>(load(i + j)));
  return {combine<M, Acc, W>(st), n};
}

#endif

template <Method M, Real T, unsigned W>
SumResult<acc_t<M, T>> vectorized_sum(std::span<const T> x) noexcept {
#if TWOFOLD_HAS_VECTOR_EXTENSIONS
  const T* p = x.data();
  return run_vectorized<M, T, W>(
      x.size(), [p]<unsigned NW>(std::size_t i) { return lanes::load<T, NW>(p + i); },
      [p](std::size_t i) { return p[i]; });
#else
  return run_unrolled<M, T, W>(x.size(), [p = x.data()](std::size_t i) { return p[i]; });
#endif
}

template <Method M, Real T, unsigned W>
SumResult<acc_t<M, T>> vectorized_dot(std::span<const T> a, std::span<const T> b) noexcept {
  const T* pa = a.data();
  const T* pb = b.data();
#if TWOFOLD_HAS_VECTOR_EXTENSIONS
  return run_vectorized<M, T, W>(
      a.size(),
      [pa, pb]<unsigned NW>(std::size_t i) { return lanes::load<T, NW>(pa + i) * lanes::load<T, NW>(pb + i); },
      [pa, pb](std::size_t i) { return pa[i] * pb[i]; });
#else
  return run_unrolled<M, T, W>(a.size(), [pa, pb](std::size_t i) { return pa[i] * pb[i]; });
#endif
}

template <Method M, Real T, typename Load>
SumResult<acc_t<M, T>> dispatch_scalar(Flavor f, std::size_t n, Load load) {
  if (f.kind == Flavor::Kind::Sequential) return run_sequential<M, T>(n, load);
  switch (f.lanes) {
    case 2: return run_unrolled<M, T, 2>(n, load);
    case 4: return run_unrolled<M, T, 4>(n, load);
    case 8: return run_unrolled<M, T, 8>(n, load);
    case 16: return run_unrolled<M, T, 16>(n, load);
  }
  throw std::invalid_argument("unsupported flavor " + to_string(f));
}

inline void check_flavor(Flavor f) {
  if (!is_valid(f)) throw std::invalid_argument("invalid flavor " + to_string(f));
}

template <Method M, Real T>
SumResult<acc_t<M, T>> sum(std::span<const T> x, Flavor f) {
  check_flavor(f);
  if (f.kind == Flavor::Kind::Vectorized) {
    switch (f.lanes) {
      case 2: return vectorized_sum<M, T, 2>(x);
      case 4: return vectorized_sum<M, T, 4>(x);
      case 8: return vectorized_sum<M, T, 8>(x);
      case 16: return vectorized_sum<M, T, 16>(x);
    }
  }
  return dispatch_scalar<M, T>(f, x.size(), [p = x.data()](std::size_t i) { return p[i]; });
}

template <Method M, Real T>
SumResult<acc_t<M, T>> dot(std::span<const T> a, std::span<const T> b, Flavor f) {
  check_flavor(f);
  if (a.size() != b.size()) throw std::invalid_argument("dot: arrays differ in length");
  if (f.kind == Flavor::Kind::Vectorized) {
    switch (f.lanes) {
      case 2: return vectorized_dot<M, T, 2>(a, b);
      case 4: return vectorized_dot<M, T, 4>(a, b);
      case 8: return vectorized_dot<M, T, 8>(a, b);
      case 16: return vectorized_dot<M, T, 16>(a, b);
    }
  }
  return dispatch_scalar<M, T>(f, a.size(),
                               [pa = a.data(), pb = b.data()](std::size_t i) { return pa[i] * pb[i]; });
}

}  // namespace kernels::detail

// Summation.

template <Real T>
SumResult<T> sum_direct(std::span<const T> x, Flavor f = Flavor::sequential()) {
  return kernels::detail::sum<Method::Direct, T>(x, f);
}

// binary32 data, binary64 accumulator. binary64 data has no wider hardware
// type; see oracle.hpp for its exact counterpart.
inline SumResult<double> sum_wide(std::span<const float> x, Flavor f = Flavor::sequential()) {
  return kernels::detail::sum<Method::WideAccumulator, float>(x, f);
}

template <Real T>
SumResult<T> sum_twofold_fast(std::span<const T> x, Flavor f = Flavor::sequential()) {
  return kernels::detail::sum<Method::TwofoldFast, T>(x, f);
}

template <Real T>
SumResult<T> sum_twofold_rigorous(std::span<const T> x, Flavor f = Flavor::sequential()) {
  return kernels::detail::sum<Method::TwofoldRigorous, T>(x, f);
}

template <Real T>
SumResult<T> sum_kahan(std::span<const T> x, Flavor f = Flavor::sequential()) {
  return kernels::detail::sum<Method::Kahan, T>(x, f);
}

// Dot products. Throw std::invalid_argument when lengths differ.

template <Real T>
SumResult<T> dot_direct(std::span<const T> a, std::span<const T> b, Flavor f = Flavor::sequential()) {
  return kernels::detail::dot<Method::Direct, T>(a, b, f);
}

inline SumResult<double> dot_wide(std::span<const float> a, std::span<const float> b,
                                  Flavor f = Flavor::sequential()) {
  return kernels::detail::dot<Method::WideAccumulator, float>(a, b, f);
}

template <Real T>
SumResult<T> dot_twofold_fast(std::span<const T> a, std::span<const T> b,
                              Flavor f = Flavor::sequential()) {
  return kernels::detail::dot<Method::TwofoldFast, T>(a, b, f);
}

template <Real T>
SumResult<T> dot_twofold_rigorous(std::span<const T> a, std::span<const T> b,
                                  Flavor f = Flavor::sequential()) {
  return kernels::detail::dot<Method::TwofoldRigorous, T>(a, b, f);
}

template <Real T>
SumResult<T> dot_kahan(std::span<const T> a, std::span<const T> b, Flavor f = Flavor::sequential()) {
  return kernels::detail::dot<Method::Kahan, T>(a, b, f);
}

// Convenience overloads so callers can pass std::vector / std::array directly.
template <Real T>
SumResult<T> sum_direct(const std::vector<T>& x, Flavor f = Flavor::sequential()) {
  return sum_direct<T>(std::span<const T>(x), f);
}
template <Real T>
SumResult<T> sum_twofold_fast(const std::vector<T>& x, Flavor f = Flavor::sequential()) {
  return sum_twofold_fast<T>(std::span<const T>(x), f);
}
template <Real T>
SumResult<T> sum_twofold_rigorous(const std::vector<T>& x, Flavor f = Flavor::sequential()) {
  return sum_twofold_rigorous<T>(std::span<const T>(x), f);
}
template <Real T>
SumResult<T> sum_kahan(const std::vector<T>& x, Flavor f = Flavor::sequential()) {
  return sum_kahan<T>(std::span<const T>(x), f);
}

}  // namespace twofold
