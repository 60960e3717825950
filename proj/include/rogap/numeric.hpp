#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>

#include "rogap/errors.hpp"

namespace rogap {

/// Exact arbitrary-precision rational. Expression templates are off so that
/// `auto` and generic code behave like with `double`.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

enum class Arithmetic { Float, Rational };

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

template <class S>
concept Scalar = std::is_same_v<S, double> || std::is_same_v<S, Rational>;

// Tolerances for float mode. Rational mode compares exactly.
inline constexpr double kAbsTol = 1e-9;
inline constexpr double kCapacityRelTol = 1e-9;
inline constexpr double kPivotTol = 1e-9;
inline constexpr double kCertificateTol = 1e-7;

template <Scalar S>
S from_rational(const Rational& q) {
  if constexpr (is_exact_v<S>) {
    return q;
  } else {
    return q.convert_to<double>();
  }
}

template <Scalar S>
double to_double(const S& v) {
  if constexpr (is_exact_v<S>) {
    return v.template convert_to<double>();
  } else {
    return v;
  }
}

/// Exact value of a double as a rational (binary fractions are exact).
inline Rational rational_from_double(double d) { return Rational(d); }

template <Scalar S>
S scalar_from_double(double d) {
  if constexpr (is_exact_v<S>) {
    return Rational(d);
  } else {
    return d;
  }
}

/// a <= b with the absolute tolerance policy for float data.
template <Scalar S>
bool leq_abs(const S& a, const S& b) {
  if constexpr (is_exact_v<S>) {
    return a <= b;
  } else {
    return a <= b + kAbsTol;
  }
}

/// load <= capacity with the relative capacity tolerance used by the online
/// acceptance tests.
template <Scalar S>
bool fits_capacity(const S& load, const S& capacity) {
  if constexpr (is_exact_v<S>) {
    return load <= capacity;
  } else {
    return load <= capacity + kCapacityRelTol * capacity;
  }
}

template <Scalar S>
bool is_negative_beyond(const S& v, double tol) {
  if constexpr (is_exact_v<S>) {
    (void)tol;
    return v < 0;
  } else {
    return v < -tol;
  }
}

template <Scalar S>
S abs_value(const S& v) {
  if constexpr (is_exact_v<S>) {
    return v < 0 ? S(-v) : v;
  } else {
    return std::fabs(v);
  }
}

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  return std::string(buf, res.ptr);
}

/// "p/q" or "p" for integers.
inline std::string format_rational(const Rational& q) {
  Integer num = boost::multiprecision::numerator(q);
  Integer den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

inline Integer pow10(long e) {
  Integer r = 1;
  for (long k = 0; k < e; ++k) r *= 10;
  return r;
}

}  // namespace detail

/// Parses "p/q", a signed integer, or a decimal literal with optional
/// exponent ("-1.25e3") into an exact rational. Throws ParseError.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw Error(ErrorCode::ParseError, "malformed number '" + std::string(text) + "'");
  };
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) return fail();

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    bool neg = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
      neg = num.front() == '-';
      num.remove_prefix(1);
    }
    if (!detail::all_digits(num) || !detail::all_digits(den)) return fail();
    Integer p{std::string(num)};
    Integer q{std::string(den)};
    if (q == 0) {
      throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    }
    Rational r(p, q);
    return neg ? Rational(-r) : r;
  }

  bool neg = false;
  if (s.front() == '-' || s.front() == '+') {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_neg = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_neg = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!detail::all_digits(exp_part) || exp_part.size() > 6) return fail();
    exponent = std::stol(std::string(exp_part));
    if (exp_neg) exponent = -exponent;
  }
  std::string_view int_part = s;
  std::string_view frac_part;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) return fail();
  if (!int_part.empty() && !detail::all_digits(int_part)) return fail();
  if (!frac_part.empty() && !detail::all_digits(frac_part)) return fail();

  std::string digits = std::string(int_part) + std::string(frac_part);
  Integer mantissa(digits.empty() ? std::string("0") : digits);
  long scale = static_cast<long>(frac_part.size()) - exponent;
  Rational r = scale >= 0 ? Rational(mantissa, detail::pow10(scale))
                          : Rational(mantissa * detail::pow10(-scale));
  return neg ? Rational(-r) : r;
}

/// Harmonic number H_k = sum_{i=1}^k 1/i; H_0 = 0.
template <Scalar S>
S harmonic(std::size_t k) {
  S h = 0;
  for (std::size_t i = 1; i <= k; ++i) {
    if constexpr (is_exact_v<S>) {
      h += Rational(1, static_cast<long>(i));
    } else {
      h += 1.0 / static_cast<double>(i);
    }
  }
  return h;
}

}  // namespace rogap
