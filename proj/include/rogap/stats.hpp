#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace rogap {

inline constexpr double kZ99 = 2.576;

/// Sample mean with standard error and a two-sided 99% normal interval.
/// The standard error is undefined for a single sample.
struct Stats {
  std::uint64_t count = 0;
  double mean = 0.0;
  std::optional<double> stderr_;
  std::optional<std::pair<double, double>> ci99;
};

/// Summation runs in index order so the result does not depend on how the
/// samples were produced.
inline Stats summarize(const std::vector<double>& xs) {
  Stats s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    const double var = ss / static_cast<double>(xs.size() - 1);
    const double se = std::sqrt(var / static_cast<double>(xs.size()));
    s.stderr_ = se;
    s.ci99 = std::make_pair(s.mean - kZ99 * se, s.mean + kZ99 * se);
  }
  return s;
}

}  // namespace rogap
