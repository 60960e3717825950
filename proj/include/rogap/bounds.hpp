#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "rogap/errors.hpp"
#include "rogap/numeric.hpp"

namespace rogap {

namespace bounds_detail {

inline void require_sample(std::size_t n, std::size_t t) {
  if (t < 1 || t >= n) {
    throw Error(ErrorCode::BadArguments,
                "need 1 <= t < n, got n=" + std::to_string(n) + " t=" + std::to_string(t));
  }
}

template <Scalar S>
S ratio(std::size_t a, std::size_t b) {
  if constexpr (is_exact_v<S>) return Rational(static_cast<long>(a), static_cast<long>(b));
  else return static_cast<double>(a) / static_cast<double>(b);
}

}  // namespace bounds_detail

/// Finite-n guarantee of InfeasibleGAP: 2 - 2t/n + H_t - H_n.
template <Scalar S = double>
S lemma3_bound(std::size_t n, std::size_t t) {
  bounds_detail::require_sample(n, t);
  return S(2) - S(2) * bounds_detail::ratio<S>(t, n) + harmonic<S>(t) - harmonic<S>(n);
}

/// The same quantity in its pre-simplification form,
/// sum_{l=t+1}^{n} (1/n)(1 - sum_{k=t+1}^{l-1} 1/k).
template <Scalar S = double>
S lemma3_bound_unsimplified(std::size_t n, std::size_t t) {
  bounds_detail::require_sample(n, t);
  S total = 0;
  for (std::size_t l = t + 1; l <= n; ++l) {
    S inner = 1;
    for (std::size_t k = t + 1; k + 1 <= l; ++k) inner -= bounds_detail::ratio<S>(1, k);
    total += inner * bounds_detail::ratio<S>(1, n);
  }
  return total;
}

/// Finite-n guarantee of the fractional knapsack algorithm relative to the
/// fractional optimum: (t/n) sum_{l=t+1}^{n} 1/(l-1) = (t/n)(H_{n-1} - H_{t-1}).
template <Scalar S = double>
S theorem2_bound(std::size_t n, std::size_t t) {
  bounds_detail::require_sample(n, t);
  return bounds_detail::ratio<S>(t, n) * (harmonic<S>(n - 1) - harmonic<S>(t - 1));
}

/// Per-item factor of the knapsack guarantee: E[x_j] >= factor * x~_j with
/// factor = (1/n) sum_{l=t+1}^{n} t/(l-1). Zero when t = 0.
template <Scalar S = double>
S lemma4_factor(std::size_t n, std::size_t t) {
  if (t >= n) throw Error(ErrorCode::BadArguments, "need t < n");
  S total = 0;
  if (t == 0) return total;
  for (std::size_t l = t + 1; l <= n; ++l) total += bounds_detail::ratio<S>(t, l - 1);
  return total * bounds_detail::ratio<S>(1, n);
}

/// Overflow probability bound for one bin before round l: sum_{k=t+1}^{l-1} 1/k.
template <Scalar S = double>
S lemma2_bound(std::size_t t, std::size_t round) {
  S total = 0;
  for (std::size_t k = t + 1; k + 1 <= round; ++k) total += bounds_detail::ratio<S>(1, k);
  return total;
}

inline const double kOneMinusLn2 = 1.0 - std::numbers::ln2;
inline const double kHalfOneMinusLn2 = (1.0 - std::numbers::ln2) / 2.0;
inline const double kInvE = 1.0 / std::numbers::e;

}  // namespace rogap
