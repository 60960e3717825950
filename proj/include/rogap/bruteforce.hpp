#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rogap/errors.hpp"
#include "rogap/model.hpp"
#include "rogap/numeric.hpp"

namespace rogap {

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

/// base^exp if it does not exceed `budget`, else nullopt.
inline std::optional<std::uint64_t> bounded_power(std::uint64_t base, std::size_t exp, std::uint64_t budget) {
  std::uint64_t r = 1;
  for (std::size_t k = 0; k < exp; ++k) {
    if (base != 0 && r > budget / base) return std::nullopt;
    r *= base;
  }
  if (r > budget) return std::nullopt;
  return r;
}

template <Scalar S>
struct IntegralGapSolution {
  Assignment assignment;
  S value = 0;
  /// Decision per item: 0 = unassigned, i+1 = bin i.
  std::vector<std::size_t> decisions;
};

namespace bruteforce_detail {

template <Scalar S>
struct GapSearch {
  const GapInstance& inst;
  std::vector<S> loads;
  std::vector<std::size_t> current;
  std::vector<std::size_t> best;
  S best_value = 0;
  bool have_best = false;

  void visit(std::size_t j, const S& value) {
    if (j == inst.num_items()) {
      if (!have_best || value > best_value) {
        best_value = value;
        best = current;
        have_best = true;
      }
      return;
    }
    // Choices in lexicographic order: unassigned first, then bins 1..m.
    current[j] = 0;
    visit(j + 1, value);
    for (std::size_t i = 0; i < inst.num_bins(); ++i) {
      const S next = loads[i] + inst.size<S>(i, j);
      if (!(next <= inst.capacity<S>(i))) continue;  // infeasible for every completion
      loads[i] = next;
      current[j] = i + 1;
      visit(j + 1, value + inst.value<S>(i, j));
      loads[i] -= inst.size<S>(i, j);
    }
    current[j] = 0;
  }
};

}  // namespace bruteforce_detail

/// Exhaustive search over all (m+1)^n decision vectors satisfying C2/C3,
/// filtered by C1. Among maximizers the lexicographically smallest decision
/// vector wins.
template <Scalar S>
IntegralGapSolution<S> solve_integral_gap_bruteforce(const GapInstance& inst,
                                                     std::uint64_t budget = kDefaultBudget) {
  if (!bounded_power(inst.num_bins() + 1, inst.num_items(), budget)) {
    throw Error(ErrorCode::BudgetExceeded, "(m+1)^n exceeds the enumeration budget of " +
                                               std::to_string(budget) + " states");
  }
  bruteforce_detail::GapSearch<S> search{inst, std::vector<S>(inst.num_bins(), S(0)),
                                         std::vector<std::size_t>(inst.num_items(), 0), {}, S(0), false};
  search.visit(0, S(0));
  IntegralGapSolution<S> sol;
  sol.decisions = search.best;
  sol.value = search.best_value;
  sol.assignment = empty_assignment(inst);
  for (std::size_t j = 0; j < inst.num_items(); ++j) {
    if (sol.decisions[j] != 0) sol.assignment(sol.decisions[j] - 1, j) = 1;
  }
  return sol;
}

template <Scalar S>
struct IntegralKnapsackSolution {
  std::vector<bool> chosen;
  S value = 0;
};

/// max value over subsets with total size <= C, by exhaustive search over 2^n.
template <Scalar S>
IntegralKnapsackSolution<S> solve_integral_knapsack_bruteforce(const KnapsackInstance& inst,
                                                               std::uint64_t budget = kDefaultBudget) {
  const std::size_t n = inst.num_items();
  if (!bounded_power(2, n, budget)) {
    throw Error(ErrorCode::BudgetExceeded,
                "2^n exceeds the enumeration budget of " + std::to_string(budget) + " states");
  }
  IntegralKnapsackSolution<S> best{std::vector<bool>(n, false), S(0)};
  std::vector<bool> current(n, false);
  auto visit = [&](auto&& self, std::size_t j, const S& size, const S& value) -> void {
    if (j == n) {
      if (value > best.value) best = {current, value};
      return;
    }
    current[j] = false;
    self(self, j + 1, size, value);
    const S next = size + inst.size<S>(j);
    if (next <= inst.capacity<S>()) {
      current[j] = true;
      self(self, j + 1, next, value + inst.value<S>(j));
      current[j] = false;
    }
  };
  visit(visit, 0, S(0), S(0));
  return best;
}

}  // namespace rogap
