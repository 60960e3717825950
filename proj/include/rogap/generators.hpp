#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rogap/errors.hpp"
#include "rogap/model.hpp"
#include "rogap/numeric.hpp"
#include "rogap/random.hpp"

namespace rogap {

/// Integer ranges for the uniform GAP generator. Every value, size and
/// capacity is drawn uniformly from its closed range, so generated data is
/// exact in rational mode.
struct GapRanges {
  std::int64_t v_min = 1;
  std::int64_t v_max = 100;
  std::int64_t s_min = 1;
  std::int64_t s_max = 50;
  std::int64_t c_min = 50;
  std::int64_t c_max = 100;
};

inline GapInstance gen_uniform_gap(std::size_t n, std::size_t m, std::uint64_t seed,
                                   const GapRanges& r = {}) {
  if (n == 0 || m == 0) throw Error(ErrorCode::BadRange, "n and m must be >= 1");
  if (r.v_min < 0 || r.v_min > r.v_max) throw Error(ErrorCode::BadRange, "need 0 <= v_min <= v_max");
  if (r.s_min <= 0 || r.s_min > r.s_max) throw Error(ErrorCode::BadRange, "need 0 < s_min <= s_max");
  if (r.c_min > r.c_max) throw Error(ErrorCode::BadRange, "need c_min <= c_max");
  if (r.s_max > r.c_min) throw Error(ErrorCode::BadRange, "need s_max <= c_min so every item fits");

  Rng rng(seed);
  GapCandidate c;
  c.capacities.reserve(m);
  for (std::size_t i = 0; i < m; ++i) c.capacities.emplace_back(uniform_int(rng, r.c_min, r.c_max));
  c.values.assign(m, std::vector<Rational>(n));
  c.sizes.assign(m, std::vector<Rational>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      c.values[i][j] = Rational(uniform_int(rng, r.v_min, r.v_max));
      c.sizes[i][j] = Rational(uniform_int(rng, r.s_min, r.s_max));
    }
  }
  return validate_gap(c);
}

enum class KnapsackFamily { Uncorrelated, WeaklyCorrelated, StronglyCorrelated, SubsetSum };

inline KnapsackFamily parse_knapsack_family(std::string_view name) {
  if (name == "uncorrelated") return KnapsackFamily::Uncorrelated;
  if (name == "weakly-correlated" || name == "weak") return KnapsackFamily::WeaklyCorrelated;
  if (name == "strongly-correlated" || name == "strong") return KnapsackFamily::StronglyCorrelated;
  if (name == "subset-sum") return KnapsackFamily::SubsetSum;
  throw Error(ErrorCode::UnknownFamily, "unknown knapsack family '" + std::string(name) + "'");
}

inline std::string_view to_string(KnapsackFamily f) {
  switch (f) {
    case KnapsackFamily::Uncorrelated: return "uncorrelated";
    case KnapsackFamily::WeaklyCorrelated: return "weakly-correlated";
    case KnapsackFamily::StronglyCorrelated: return "strongly-correlated";
    case KnapsackFamily::SubsetSum: return "subset-sum";
  }
  return "?";
}

struct KnapsackParams {
  std::int64_t range = 100;               // sizes drawn from [1, range]
  std::optional<std::int64_t> offset;     // value offset for correlated families; default range/10
  std::optional<std::int64_t> capacity;   // default: max(max s_j, floor(sum s_j / 2))
};

/// The classic knapsack benchmark families: uncorrelated (v, s independent),
/// weakly correlated (v within +-offset of s), strongly correlated
/// (v = s + offset) and subset-sum (v = s).
inline KnapsackInstance gen_knapsack_family(KnapsackFamily family, std::size_t n, std::uint64_t seed,
                                            const KnapsackParams& p = {}) {
  if (n == 0) throw Error(ErrorCode::BadRange, "n must be >= 1");
  if (p.range < 1) throw Error(ErrorCode::BadRange, "range must be >= 1");
  const std::int64_t offset = p.offset.value_or(std::max<std::int64_t>(1, p.range / 10));
  if (offset < 0) throw Error(ErrorCode::BadRange, "offset must be >= 0");

  Rng rng(seed);
  KnapsackCandidate c;
  std::int64_t total = 0;
  std::int64_t largest = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::int64_t s = uniform_int(rng, 1, p.range);
    std::int64_t v = 0;
    switch (family) {
      case KnapsackFamily::Uncorrelated: v = uniform_int(rng, 1, p.range); break;
      case KnapsackFamily::WeaklyCorrelated:
        v = uniform_int(rng, std::max<std::int64_t>(1, s - offset), s + offset);
        break;
      case KnapsackFamily::StronglyCorrelated: v = s + offset; break;
      case KnapsackFamily::SubsetSum: v = s; break;
    }
    c.sizes.emplace_back(s);
    c.values.emplace_back(v);
    total += s;
    largest = std::max(largest, s);
  }
  if (p.capacity) {
    if (*p.capacity < largest) throw Error(ErrorCode::BadRange, "capacity below the largest size");
    c.capacity = Rational(*p.capacity);
  } else {
    c.capacity = Rational(std::max(largest, total / 2));
  }
  return validate_knapsack(c);
}

/// Finite discrete distribution over positive values.
struct DiscreteDistribution {
  std::vector<Rational> support;
  std::vector<double> weights;  // unnormalized, same length as support
};

/// Parses "point:V", "uniform:a,b,c" or "weighted:v1@w1,v2@w2".
inline DiscreteDistribution parse_distribution(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::ParseError, "distribution needs the form kind:values, got '" +
                                           std::string(text) + "'");
  }
  std::string_view kind = text.substr(0, colon);
  std::string_view rest = text.substr(colon + 1);
  std::vector<std::string_view> parts;
  while (!rest.empty()) {
    auto comma = rest.find(',');
    parts.push_back(rest.substr(0, comma));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  DiscreteDistribution d;
  if (kind == "point") {
    if (parts.size() > 1) throw Error(ErrorCode::ParseError, "point distribution takes one value");
    for (auto p : parts) {
      d.support.push_back(parse_rational(p));
      d.weights.push_back(1.0);
    }
  } else if (kind == "uniform") {
    for (auto p : parts) {
      d.support.push_back(parse_rational(p));
      d.weights.push_back(1.0);
    }
  } else if (kind == "weighted") {
    for (auto p : parts) {
      auto at = p.find('@');
      if (at == std::string_view::npos) throw Error(ErrorCode::ParseError, "weighted entries are v@w");
      d.support.push_back(parse_rational(p.substr(0, at)));
      d.weights.push_back(to_double(parse_rational(p.substr(at + 1))));
    }
  } else {
    throw Error(ErrorCode::UnknownFamily, "unknown distribution kind '" + std::string(kind) + "'");
  }
  return d;
}

/// Unit-size instance: C = 1, s_j = 1, v_j i.i.d. from `dist`.
inline KnapsackInstance gen_unit_iid(std::size_t n, const DiscreteDistribution& dist, std::uint64_t seed) {
  if (dist.support.empty()) throw Error(ErrorCode::EmptySupport, "distribution has empty support");
  if (dist.weights.size() != dist.support.size()) {
    throw Error(ErrorCode::DimensionMismatch, "distribution weights and support differ in length");
  }
  if (n == 0) throw Error(ErrorCode::BadRange, "n must be >= 1");
  double total = 0;
  for (std::size_t k = 0; k < dist.support.size(); ++k) {
    if (dist.support[k] <= 0) throw Error(ErrorCode::BadRange, "support values must be > 0");
    if (!(dist.weights[k] >= 0)) throw Error(ErrorCode::BadRange, "weights must be >= 0");
    total += dist.weights[k];
  }
  if (!(total > 0)) throw Error(ErrorCode::EmptySupport, "distribution has zero total weight");

  Rng rng(seed);
  KnapsackCandidate c;
  c.capacity = 1;
  for (std::size_t j = 0; j < n; ++j) {
    const double u = uniform_unit(rng) * total;
    double acc = 0;
    std::size_t pick = dist.support.size() - 1;
    for (std::size_t k = 0; k < dist.support.size(); ++k) {
      acc += dist.weights[k];
      if (u < acc && dist.weights[k] > 0) {
        pick = k;
        break;
      }
    }
    c.values.push_back(dist.support[pick]);
    c.sizes.emplace_back(1);
  }
  return validate_knapsack(c);
}

}  // namespace rogap
