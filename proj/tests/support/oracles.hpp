#pragma once

// Independent reference implementations used only by tests. None of them
// calls the library's solvers or online algorithms.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

#include "rogap/model.hpp"
#include "rogap/numeric.hpp"

namespace oracle {

using rogap::GapInstance;
using rogap::KnapsackInstance;
using rogap::Rational;

/// Integral GAP optimum by depth-first branch and bound. Items are branched
/// in order of decreasing best value; a node is cut when its value plus the
/// best value of every remaining item cannot beat the incumbent.
class BranchAndBound {
 public:
  explicit BranchAndBound(const GapInstance& inst) : inst_(inst) {
    const std::size_t n = inst.num_items();
    best_of_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      Rational b = 0;
      for (std::size_t i = 0; i < inst.num_bins(); ++i) b = std::max(b, inst.values()(i, j));
      best_of_[j] = b;
    }
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return best_of_[a] > best_of_[b]; });
    suffix_.assign(n + 1, Rational(0));
    for (std::size_t k = n; k-- > 0;) suffix_[k] = suffix_[k + 1] + best_of_[order_[k]];
    room_ = inst.capacities();
  }

  Rational solve() {
    incumbent_ = 0;
    branch(0, Rational(0));
    return incumbent_;
  }

  std::size_t nodes() const { return nodes_; }

 private:
  void branch(std::size_t k, const Rational& value) {
    ++nodes_;
    if (value > incumbent_) incumbent_ = value;
    if (k == order_.size()) return;
    if (value + suffix_[k] <= incumbent_) return;
    const std::size_t j = order_[k];
    for (std::size_t i = 0; i < inst_.num_bins(); ++i) {
      const Rational& s = inst_.sizes()(i, j);
      if (s > room_[i]) continue;
      room_[i] -= s;
      branch(k + 1, value + inst_.values()(i, j));
      room_[i] += s;
    }
    branch(k + 1, value);
  }

  const GapInstance& inst_;
  std::vector<Rational> best_of_;
  std::vector<std::size_t> order_;
  std::vector<Rational> suffix_;
  std::vector<Rational> room_;
  Rational incumbent_ = 0;
  std::size_t nodes_ = 0;
};

/// Integral knapsack optimum by scanning all 2^n subsets as bit masks.
inline Rational knapsack_by_masks(const KnapsackInstance& inst) {
  const std::size_t n = inst.num_items();
  Rational best = 0;
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    Rational size = 0;
    Rational value = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (1ul << j)) {
        size += inst.sizes()[j];
        value += inst.values()[j];
      }
    }
    if (size <= inst.capacity_exact() && value > best) best = value;
  }
  return best;
}

/// Fractional knapsack optimum by the exchange argument on sorted
/// densities, written without ties handling (ties do not change the value).
inline Rational fractional_knapsack_value(const KnapsackInstance& inst) {
  std::vector<std::size_t> idx(inst.num_items());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return inst.values()[a] / inst.sizes()[a] > inst.values()[b] / inst.sizes()[b];
  });
  Rational room = inst.capacity_exact();
  Rational value = 0;
  for (std::size_t j : idx) {
    if (room <= 0) break;
    const Rational take = std::min(room, inst.sizes()[j]);
    value += inst.values()[j] * take / inst.sizes()[j];
    room -= take;
  }
  return value;
}

/// The online fractional knapsack rule for unit sizes and unit capacity,
/// where the greedy solution of a set is its most valuable item (smallest
/// index among equals). Returns the average value over all orders.
inline Rational unit_knapsack_average(const std::vector<Rational>& values, std::size_t t) {
  const std::size_t n = values.size();
  auto best_of = [&](const std::vector<std::size_t>& set) {
    std::size_t b = set.front();
    for (std::size_t j : set) {
      if (values[j] > values[b] || (values[j] == values[b] && j < b)) b = j;
    }
    return b;
  };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rational total = 0;
  std::size_t count = 0;
  do {
    Rational run = 0;
    for (std::size_t l = t + 1; l <= n; ++l) {
      std::vector<std::size_t> prev(order.begin(), order.begin() + static_cast<long>(l - 1));
      std::vector<std::size_t> curr(order.begin(), order.begin() + static_cast<long>(l));
      const std::size_t item = order[l - 1];
      Rational x = best_of(curr) == item ? 1 : 0;
      // Unit mass moves off an earlier post-sample item when it loses the top spot.
      if (!prev.empty()) {
        const std::size_t top_prev = best_of(prev);
        const std::size_t pos_prev =
            static_cast<std::size_t>(std::find(order.begin(), order.end(), top_prev) - order.begin()) + 1;
        if (pos_prev >= t + 1 && best_of(curr) != top_prev) x -= 1;
      }
      run += x * values[item];
    }
    total += run;
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  return total / Rational(static_cast<long>(count));
}

}  // namespace oracle
