#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rogap/errors.hpp"
#include "rogap/greedy.hpp"
#include "rogap/item_set.hpp"
#include "rogap/model.hpp"
#include "rogap/numeric.hpp"

namespace rogap {

/// Default sampling length floor(n/e).
inline std::size_t default_knapsack_sample(std::size_t n) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) / std::numbers::e));
}

template <Scalar S>
struct KnapsackRound {
  std::size_t round = 0;  // 1-based
  std::size_t item = 0;
  S greedy_fraction = 0;  // x~_{pi(l)}(Q_l)
  S compensation = 0;     // size displaced from post-sample items
  S displaced_total = 0;  // size displaced from all earlier items
  S raw_fraction = 0;     // before clamping
  S packed_fraction = 0;
  bool clamped = false;
};

template <Scalar S>
struct KnapsackRun {
  std::size_t sample_size = 0;
  std::vector<S> fractions;  // x_j
  std::vector<KnapsackRound<S>> rounds;
  S value = 0;
  S packed_size = 0;
};

/// sum_{k=first}^{l-1} s_{pi(k)} (x~_{pi(k)}(Q_{l-1}) - x~_{pi(k)}(Q_l)), rounds
/// 1-based. Every summand must be nonnegative since adding an item never
/// raises the greedy fraction of another; a negative one raises
/// NegativeSummand.
template <Scalar S>
S displaced_size(const KnapsackInstance& inst, const Permutation& perm, std::size_t first_round,
                 std::size_t round, const GreedySolution<S>& prev, const GreedySolution<S>& curr) {
  if (round < 1 || round > perm.size()) throw Error(ErrorCode::BadArguments, "round out of range");
  S total = 0;
  for (std::size_t k = std::max<std::size_t>(first_round, 1); k < round; ++k) {
    const std::size_t item = perm[k - 1];
    const S term = inst.size<S>(item) * (prev.fractions[item] - curr.fractions[item]);
    if (is_negative_beyond(term, kAbsTol)) {
      throw Error(ErrorCode::NegativeSummand,
                  "greedy fraction of item " + std::to_string(item + 1) + " increased in round " +
                      std::to_string(round),
                  std::nullopt, item);
    }
    total += term;
  }
  return total;
}

/// Compensation subtracted in round `round` for sampling length t: the size
/// removed from the greedy solution among items revealed after the sample.
template <Scalar S>
S compensation_term(const KnapsackInstance& inst, const Permutation& perm, std::size_t round, std::size_t t,
                    const GreedySolution<S>& prev, const GreedySolution<S>& curr) {
  return displaced_size<S>(inst, perm, t + 1, round, prev, curr);
}

/// Memo of greedy solutions keyed by item subset.
template <Scalar S>
class GreedyCache {
 public:
  explicit GreedyCache(const KnapsackInstance& inst) : inst_(&inst) {}

  const GreedySolution<S>& solve(const ItemSet& subset) {
    if (auto it = memo_.find(subset); it != memo_.end()) return it->second;
    return memo_.emplace(subset, fractional_greedy<S>(*inst_, subset)).first->second;
  }

 private:
  const KnapsackInstance* inst_;
  std::unordered_map<ItemSet, GreedySolution<S>, ItemSetHash> memo_;
};

/// Online fractional knapsack with sampling length t (default floor(n/e)).
/// Each later round packs the new item by its greedy fraction on the
/// revealed items, minus the size the new item displaces from items that
/// arrived after the sample. Greedy solutions come from `greedy(ItemSet)`.
template <Scalar S, class GreedyFn>
KnapsackRun<S> run_fractional_knapsack_with(const KnapsackInstance& inst, const Permutation& perm,
                                            std::optional<std::size_t> t, GreedyFn&& greedy) {
  const std::size_t n = inst.num_items();
  if (perm.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "permutation length differs from the number of items");
  }
  const std::size_t sample = t.value_or(default_knapsack_sample(n));
  if (sample > n) throw Error(ErrorCode::BadArguments, "sampling length exceeds n");

  KnapsackRun<S> run;
  run.sample_size = sample;
  run.fractions.assign(n, S(0));
  ItemSet revealed(n);
  for (std::size_t pos = 0; pos < sample; ++pos) revealed.insert(perm[pos]);
  GreedySolution<S> prev = greedy(revealed);  // Q_t; empty set when t = 0

  for (std::size_t pos = sample; pos < n; ++pos) {
    const std::size_t round = pos + 1;
    const std::size_t item = perm[pos];
    revealed.insert(item);
    GreedySolution<S> curr = greedy(revealed);

    KnapsackRound<S> rec;
    rec.round = round;
    rec.item = item;
    rec.greedy_fraction = curr.fractions[item];
    rec.compensation = compensation_term<S>(inst, perm, round, sample, prev, curr);
    rec.displaced_total = displaced_size<S>(inst, perm, 1, round, prev, curr);
    rec.raw_fraction = rec.greedy_fraction - rec.compensation / inst.size<S>(item);
    rec.packed_fraction = rec.raw_fraction;
    if (rec.raw_fraction < S(0) || rec.raw_fraction > S(1)) {
      if constexpr (is_exact_v<S>) {
        throw Error(ErrorCode::InvariantViolation,
                    "packed fraction outside [0, 1] in round " + std::to_string(round), std::nullopt, item);
      } else {
        if (rec.raw_fraction < -kAbsTol || rec.raw_fraction > 1.0 + kAbsTol) {
          throw Error(ErrorCode::InvariantViolation,
                      "packed fraction drifted beyond tolerance in round " + std::to_string(round),
                      std::nullopt, item);
        }
        rec.packed_fraction = std::clamp(rec.raw_fraction, 0.0, 1.0);
        rec.clamped = true;
      }
    }
    run.fractions[item] = rec.packed_fraction;
    run.value += inst.value<S>(item) * rec.packed_fraction;
    run.packed_size += inst.size<S>(item) * rec.packed_fraction;
    run.rounds.push_back(std::move(rec));
    prev = std::move(curr);
  }
  return run;
}

/// Recomputes both greedy solutions from scratch in every round.
template <Scalar S>
KnapsackRun<S> run_fractional_knapsack(const KnapsackInstance& inst, const Permutation& perm,
                                       std::optional<std::size_t> t = std::nullopt) {
  return run_fractional_knapsack_with<S>(inst, perm, t,
                                         [&](const ItemSet& q) { return fractional_greedy<S>(inst, q); });
}

}  // namespace rogap
