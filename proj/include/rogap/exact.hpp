#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "rogap/bruteforce.hpp"
#include "rogap/errors.hpp"
#include "rogap/fractional_gap.hpp"
#include "rogap/greedy.hpp"
#include "rogap/model.hpp"
#include "rogap/numeric.hpp"
#include "rogap/online_gap.hpp"
#include "rogap/online_knapsack.hpp"

namespace rogap {

/// Number of bin outcomes over all permutations: n! (m+1)^(n-t), or nullopt
/// once it passes `budget`.
inline std::optional<double> gap_enumeration_size(std::size_t n, std::size_t m, std::size_t t, std::uint64_t budget) {
  double total = 1.0;
  for (std::size_t k = 2; k <= n; ++k) {
    total *= static_cast<double>(k);
    if (total > static_cast<double>(budget)) return std::nullopt;
  }
  for (std::size_t k = t; k < n; ++k) {
    total *= static_cast<double>(m + 1);
    if (total > static_cast<double>(budget)) return std::nullopt;
  }
  return total;
}

/// Visits every (permutation, bin-choice vector) with positive probability.
/// `visit(perm, plans, choices, weight)` receives the probability of the
/// choices given the permutation; permutations are equally likely.
/// Permutations come in lexicographic order, choices in index order with
/// "no bin" last.
template <Scalar S, class Visit>
void enumerate_gap_outcomes(const GapInstance& inst, std::size_t t, FractionalGapCache<S>& cache, Visit&& visit) {
  const std::size_t n = inst.num_items();
  const std::size_t m = inst.num_bins();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<BinChoice> choices;
  do {
    const Permutation perm(order);
    const auto plans = plan_rounds<S>(inst, perm, t, cache);
    choices.assign(plans.size(), std::nullopt);
    // weights[k] is the probability of choices[0..k).
    std::vector<S> weights(plans.size() + 1, S(0));
    weights[0] = S(1);
    auto recurse = [&](auto&& self, std::size_t k) -> void {
      if (k == plans.size()) {
        visit(perm, plans, choices, weights[k]);
        return;
      }
      S residual = 1;
      for (std::size_t i = 0; i < m; ++i) {
        const S& p = plans[k].row[i];
        residual -= p;
        if (!(p > S(0))) continue;
        choices[k] = i;
        weights[k + 1] = weights[k] * p;
        self(self, k + 1);
      }
      if (residual > S(0)) {
        choices[k] = std::nullopt;
        weights[k + 1] = weights[k] * residual;
        self(self, k + 1);
      }
    };
    recurse(recurse, 0);
  } while (std::next_permutation(order.begin(), order.end()));
}

template <Scalar S>
struct ExactGapResult {
  std::size_t sample_size = 0;
  S infeasible = 0;  // E[v(x)]
  S feasible = 0;    // E[v(y)]
  S imitative = 0;   // E[v(z)]
  S random = 0;      // (E[v(y)] + E[v(z)]) / 2
  std::uint64_t permutations = 0;
  std::uint64_t outcomes = 0;
  /// Outcomes where v(y) + v(z) < v(x); zero whenever the coupling holds.
  std::uint64_t coupling_violations = 0;

  const S& expectation(GapAlgorithm a) const {
    switch (a) {
      case GapAlgorithm::Infeasible: return infeasible;
      case GapAlgorithm::Feasible: return feasible;
      case GapAlgorithm::Imitative: return imitative;
      case GapAlgorithm::Random: return random;
    }
    return random;
  }
};

/// Exact expectations of all four GAP algorithms over every permutation and
/// every bin outcome, weighted by the fractional optimum's probabilities.
/// The RandomGAP coin contributes both branches at weight 1/2. `on_outcome`
/// (optional) sees every outcome with the three coupled runs.
template <Scalar S, class OnOutcome>
ExactGapResult<S> exact_expectation_gap(const GapInstance& inst, std::optional<std::size_t> t, std::uint64_t budget,
                                        OnOutcome&& on_outcome) {
  const std::size_t n = inst.num_items();
  const std::size_t sample = t.value_or(default_gap_sample(n));
  if (sample > n) throw Error(ErrorCode::BadArguments, "sampling length exceeds n");
  if (!gap_enumeration_size(n, inst.num_bins(), sample, budget)) {
    throw Error(ErrorCode::BudgetExceeded, "n! (m+1)^(n-t) exceeds the enumeration budget of " +
                                               std::to_string(budget));
  }
  FractionalGapCache<S> cache(inst);
  ExactGapResult<S> res;
  res.sample_size = sample;
  enumerate_gap_outcomes<S>(inst, sample, cache,
                            [&](const Permutation& perm, const std::vector<RoundPlan<S>>& plans,
                                const std::vector<BinChoice>& choices, const S& weight) {
                              ++res.outcomes;
                              const auto x = run_gap_choices<S>(GapAlgorithm::Infeasible, inst, sample, plans,
                                                                choices, 0.0, false);
                              const auto y = run_gap_choices<S>(GapAlgorithm::Feasible, inst, sample, plans,
                                                                choices, 0.0, false);
                              const auto z = run_gap_choices<S>(GapAlgorithm::Imitative, inst, sample, plans,
                                                                choices, 0.0, false);
                              res.infeasible += weight * x.value;
                              res.feasible += weight * y.value;
                              res.imitative += weight * z.value;
                              if (y.value + z.value < x.value) ++res.coupling_violations;
                              on_outcome(perm, plans, choices, x, y, z);
                            });
  S perms = 1;
  res.permutations = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    perms *= S(static_cast<long>(k));
    res.permutations *= k;
  }
  res.infeasible /= perms;
  res.feasible /= perms;
  res.imitative /= perms;
  res.random = (res.feasible + res.imitative) / S(2);
  return res;
}

template <Scalar S>
ExactGapResult<S> exact_expectation_gap(const GapInstance& inst, std::optional<std::size_t> t = std::nullopt,
                                        std::uint64_t budget = kDefaultBudget) {
  return exact_expectation_gap<S>(inst, t, budget, [](auto&&...) {});
}

template <Scalar S>
struct ExactKnapsackResult {
  std::size_t sample_size = 0;
  S value = 0;                    // E[v(x)]
  std::vector<S> fractions;       // E[x_j]
  std::vector<S> greedy_full;     // x~_j on the full item set
  S greedy_value = 0;             // v(x~)
  std::uint64_t permutations = 0;
};

/// Exact average of the online fractional knapsack algorithm over all n!
/// orders. `on_run(perm, run)` (optional) sees every run.
template <Scalar S, class OnRun>
ExactKnapsackResult<S> exact_expectation_knapsack(const KnapsackInstance& inst, std::optional<std::size_t> t,
                                                  std::uint64_t budget, OnRun&& on_run) {
  const std::size_t n = inst.num_items();
  const std::size_t sample = t.value_or(default_knapsack_sample(n));
  if (sample > n) throw Error(ErrorCode::BadArguments, "sampling length exceeds n");
  if (!gap_enumeration_size(n, 0, n, budget)) {
    throw Error(ErrorCode::BudgetExceeded, "n! exceeds the enumeration budget of " + std::to_string(budget));
  }
  GreedyCache<S> cache(inst);
  ExactKnapsackResult<S> res;
  res.sample_size = sample;
  res.fractions.assign(n, S(0));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  do {
    const Permutation perm(order);
    const auto run = run_fractional_knapsack_with<S>(inst, perm, sample,
                                                     [&](const ItemSet& q) { return cache.solve(q); });
    ++res.permutations;
    res.value += run.value;
    for (std::size_t j = 0; j < n; ++j) res.fractions[j] += run.fractions[j];
    on_run(perm, run);
  } while (std::next_permutation(order.begin(), order.end()));
  const S count = S(static_cast<long>(res.permutations));
  res.value /= count;
  for (auto& f : res.fractions) f /= count;
  const auto full = fractional_greedy<S>(inst);
  res.greedy_full = full.fractions;
  res.greedy_value = full.objective;
  return res;
}

template <Scalar S>
ExactKnapsackResult<S> exact_expectation_knapsack(const KnapsackInstance& inst,
                                                  std::optional<std::size_t> t = std::nullopt,
                                                  std::uint64_t budget = kDefaultBudget) {
  return exact_expectation_knapsack<S>(inst, t, budget, [](auto&&...) {});
}

}  // namespace rogap
