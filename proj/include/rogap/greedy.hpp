#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "rogap/item_set.hpp"
#include "rogap/model.hpp"
#include "rogap/numeric.hpp"

namespace rogap {

template <Scalar S>
struct GreedySolution {
  /// x~_j for every item of the instance; 0 for items outside the subset.
  std::vector<S> fractions;
  /// Number of items packed completely (rho). The item at position rho of
  /// density_order, if any, holds the fractional remainder.
  std::size_t rho = 0;
  /// Subset members sorted by density descending, ties by smaller index.
  std::vector<std::size_t> density_order;
  S objective = 0;
  S packed_size = 0;
};

/// Density order key: a precedes b iff v_a/s_a > v_b/s_b, ties by index.
/// Compared by cross-multiplication so rational mode stays exact.
template <Scalar S>
bool denser(const KnapsackInstance& inst, std::size_t a, std::size_t b) {
  const S lhs = inst.value<S>(a) * inst.size<S>(b);
  const S rhs = inst.value<S>(b) * inst.size<S>(a);
  if (lhs != rhs) return lhs > rhs;
  return a < b;
}

/// Fractional greedy solution restricted to `subset`: the densest items are
/// packed whole while they fit, the next one fills the remaining capacity.
template <Scalar S>
GreedySolution<S> fractional_greedy(const KnapsackInstance& inst, const ItemSet& subset) {
  const std::size_t n = inst.num_items();
  if (subset.universe() != n) {
    throw Error(ErrorCode::DimensionMismatch, "item set universe differs from the instance size");
  }
  GreedySolution<S> sol;
  sol.fractions.assign(n, S(0));
  sol.density_order = subset.members();
  std::sort(sol.density_order.begin(), sol.density_order.end(),
            [&](std::size_t a, std::size_t b) { return denser<S>(inst, a, b); });

  const S& cap = inst.capacity<S>();
  S used = 0;
  std::size_t pos = 0;
  for (; pos < sol.density_order.size(); ++pos) {
    const std::size_t j = sol.density_order[pos];
    if (used + inst.size<S>(j) > cap) break;
    used += inst.size<S>(j);
    sol.fractions[j] = 1;
    sol.objective += inst.value<S>(j);
  }
  sol.rho = pos;
  if (pos < sol.density_order.size()) {
    const std::size_t j = sol.density_order[pos];
    S frac = (cap - used) / inst.size<S>(j);
    if constexpr (!is_exact_v<S>) frac = std::clamp(frac, 0.0, 1.0);
    sol.fractions[j] = frac;
    sol.objective += inst.value<S>(j) * frac;
    used += inst.size<S>(j) * frac;
  }
  sol.packed_size = used;
  return sol;
}

template <Scalar S>
GreedySolution<S> fractional_greedy(const KnapsackInstance& inst) {
  return fractional_greedy<S>(inst, ItemSet::full(inst.num_items()));
}

}  // namespace rogap
