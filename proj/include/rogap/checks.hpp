#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rogap/bounds.hpp"
#include "rogap/errors.hpp"
#include "rogap/fractional_gap.hpp"
#include "rogap/item_set.hpp"
#include "rogap/model.hpp"
#include "rogap/numeric.hpp"
#include "rogap/online_gap.hpp"
#include "rogap/online_knapsack.hpp"
#include "rogap/random.hpp"

namespace rogap {

/// Outcome of a pointwise check; `detail` names the first violation.
struct CheckResult {
  bool ok = true;
  std::string detail;

  static CheckResult fail(std::string why) { return {false, std::move(why)}; }
};

namespace checks_detail {

inline std::vector<std::size_t> rounds_of(const Permutation& perm) {
  std::vector<std::size_t> round(perm.size());
  for (std::size_t pos = 0; pos < perm.size(); ++pos) round[perm[pos]] = pos + 1;
  return round;
}

/// Items of bin i in arrival order.
inline std::vector<std::size_t> bin_items(const Assignment& x, std::size_t bin, const Permutation& perm) {
  std::vector<std::size_t> out;
  for (std::size_t pos = 0; pos < perm.size(); ++pos) {
    if (x(bin, perm[pos]) != 0) out.push_back(perm[pos]);
  }
  return out;
}

inline std::string bin_label(std::size_t i) { return "bin " + std::to_string(i + 1); }

}  // namespace checks_detail

/// C1-C3, plus at most one item per bin when `single_item_bins` is set.
template <Scalar S>
CheckResult check_feasible_output(const GapInstance& inst, const Assignment& y, bool single_item_bins = false) {
  const auto rep = check_feasibility<S>(y, inst);
  if (!rep.entries_in_domain) return CheckResult::fail("entry outside {0, 1}");
  if (!rep.c2()) return CheckResult::fail("an item is assigned to more than one bin");
  for (std::size_t i = 0; i < inst.num_bins(); ++i) {
    if (!rep.bins[i].satisfies_c1) return CheckResult::fail(checks_detail::bin_label(i) + " exceeds capacity");
    if (single_item_bins) {
      std::size_t count = 0;
      for (std::size_t j = 0; j < inst.num_items(); ++j) count += y(i, j) != 0;
      if (count > 1) return CheckResult::fail(checks_detail::bin_label(i) + " holds more than one item");
    }
  }
  return {};
}

/// C2, C3, and per bin: at most one item leaves the load above capacity, it
/// is the last one accepted, and removing it restores the capacity.
template <Scalar S>
CheckResult check_infeasible_output(const GapInstance& inst, const Permutation& perm, const Assignment& x) {
  const std::vector<std::size_t> scan(perm.order().begin(), perm.order().end());
  const auto rep = check_feasibility<S>(x, inst, &scan);
  if (!rep.entries_in_domain) return CheckResult::fail("entry outside {0, 1}");
  if (!rep.c2()) return CheckResult::fail("an item is assigned to more than one bin");
  for (std::size_t i = 0; i < inst.num_bins(); ++i) {
    if (rep.bins[i].satisfies_c1) continue;
    const auto items = checks_detail::bin_items(x, i, perm);
    const auto& over = rep.bins[i].overflow_items;
    if (over.size() != 1 || over.front() != items.back()) {
      return CheckResult::fail(checks_detail::bin_label(i) + " overflows before its last accepted item");
    }
    const S without = inst.capacity<S>(i) - rep.bins[i].slack - inst.size<S>(i, items.back());
    if (!leq_abs(without, inst.capacity<S>(i))) {
      return CheckResult::fail(checks_detail::bin_label(i) + " still overflows without its last item");
    }
  }
  return {};
}

/// Pointwise coupling of the three runs on one (instance, order, tape):
/// v(y) + v(z) >= v(x), and per bin i with l* the round of x's first
/// overflow in i: y and x agree on bin i before l*, z holds exactly x's
/// item of round l* in bin i, and without an overflow y agrees with x on
/// bin i and z leaves it empty.
template <Scalar S>
CheckResult check_coupling(const GapInstance& inst, const Permutation& perm, const Assignment& x,
                           const Assignment& y, const Assignment& z) {
  const S vx = value_of<S>(x, inst);
  const S vy = value_of<S>(y, inst);
  const S vz = value_of<S>(z, inst);
  if (is_negative_beyond(S(vy + vz - vx), kAbsTol)) {
    return CheckResult::fail("v(y) + v(z) = " + format_double(to_double(S(vy + vz))) + " < v(x) = " +
                             format_double(to_double(vx)));
  }
  const auto round = checks_detail::rounds_of(perm);
  for (std::size_t i = 0; i < inst.num_bins(); ++i) {
    const auto xs = checks_detail::bin_items(x, i, perm);
    const auto ys = checks_detail::bin_items(y, i, perm);
    const auto zs = checks_detail::bin_items(z, i, perm);
    std::optional<std::size_t> first_overflow;  // item of round l*
    S load = 0;
    for (std::size_t j : xs) {
      load += inst.size<S>(i, j);
      if (!fits_capacity(load, inst.capacity<S>(i))) {
        first_overflow = j;
        break;
      }
    }
    const std::string where = checks_detail::bin_label(i);
    if (!first_overflow) {
      if (ys != xs) return CheckResult::fail(where + ": y differs from x although x never overflows");
      if (!zs.empty()) return CheckResult::fail(where + ": z is used although x never overflows");
      continue;
    }
    const std::size_t cut = round[*first_overflow];
    std::vector<std::size_t> x_before;
    std::vector<std::size_t> y_before;
    for (std::size_t j : xs) if (round[j] < cut) x_before.push_back(j);
    for (std::size_t j : ys) if (round[j] < cut) y_before.push_back(j);
    if (x_before != y_before) {
      return CheckResult::fail(where + ": y differs from x before round " + std::to_string(cut));
    }
    if (zs.size() != 1 || zs.front() != *first_overflow) {
      return CheckResult::fail(where + ": z does not hold exactly the item of round " + std::to_string(cut));
    }
  }
  return {};
}

/// Pointwise checks of one run of the fractional knapsack algorithm: the
/// displacement inequality in every round, packed fractions in [0, 1]
/// before clamping, total size within capacity, and the telescoped size
/// sum_{l>t} s x~(Q_n) equal to the packed size.
template <Scalar S>
CheckResult check_knapsack_run(const KnapsackInstance& inst, const Permutation& perm, const KnapsackRun<S>& run) {
  for (const auto& r : run.rounds) {
    const S lhs = inst.size<S>(r.item) * r.greedy_fraction;
    if (is_negative_beyond(S(lhs - r.displaced_total), kAbsTol)) {
      return CheckResult::fail("round " + std::to_string(r.round) + ": displaced size " +
                               format_double(to_double(r.displaced_total)) + " exceeds s x~ = " +
                               format_double(to_double(lhs)));
    }
    if (is_negative_beyond(r.raw_fraction, 0.0) || r.raw_fraction > S(1) || r.clamped) {
      if constexpr (is_exact_v<S>) {
        return CheckResult::fail("round " + std::to_string(r.round) + ": fraction " +
                                 format_rational(r.raw_fraction) + " outside [0, 1]");
      } else if (r.raw_fraction < -kAbsTol || r.raw_fraction > 1.0 + kAbsTol) {
        return CheckResult::fail("round " + std::to_string(r.round) + ": fraction outside [0, 1]");
      }
    }
  }
  if (!leq_abs(run.packed_size, inst.capacity<S>())) return CheckResult::fail("packed size exceeds capacity");
  const auto full = fractional_greedy<S>(inst);
  S telescoped = 0;
  for (std::size_t pos = run.sample_size; pos < perm.size(); ++pos) {
    telescoped += inst.size<S>(perm[pos]) * full.fractions[perm[pos]];
  }
  if (!leq_abs(abs_value(S(telescoped - run.packed_size)), S(0))) {
    return CheckResult::fail("packed size differs from the telescoped greedy size");
  }
  return {};
}

struct Lemma2Report {
  std::size_t round = 0;  // l
  std::size_t bin = 0;
  std::size_t sample_size = 0;
  std::vector<std::size_t> revealed;  // Q_{l-1}
  std::uint64_t trials = 0;
  std::uint64_t overflows = 0;
  double frequency = 0.0;
  double stderr_ = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// Fixes a random Q_{l-1} of size l-1 and estimates the probability that
/// the tentative loads of rounds t+1..l-1 on `bin` exceed its capacity,
/// over uniform orders of Q_{l-1} and uniform draws. Passes when the
/// frequency is at most sum_{k=t+1}^{l-1} 1/k plus four standard errors.
template <Scalar S>
Lemma2Report verify_lemma2(const GapInstance& inst, std::size_t round, std::size_t bin, std::uint64_t trials,
                           std::uint64_t master_seed, std::optional<std::size_t> t = std::nullopt,
                           FractionalGapCache<S>* cache = nullptr) {
  const std::size_t n = inst.num_items();
  const std::size_t sample = t.value_or(default_gap_sample(n));
  if (!(sample < round && round <= n)) {
    throw Error(ErrorCode::BadArguments, "need t < l <= n, got t=" + std::to_string(sample) +
                                             " l=" + std::to_string(round) + " n=" + std::to_string(n));
  }
  if (bin >= inst.num_bins()) throw Error(ErrorCode::BadArguments, "bin index out of range", bin);
  if (trials < 1) throw Error(ErrorCode::BadArguments, "trials must be at least 1");
  std::optional<FractionalGapCache<S>> local;
  if (!cache) cache = &local.emplace(inst);

  Lemma2Report rep;
  rep.round = round;
  rep.bin = bin;
  rep.sample_size = sample;
  rep.trials = trials;
  rep.bound = to_double(lemma2_bound<S>(sample, round));

  Rng pick(derive_seed(master_seed, 0));
  std::vector<std::size_t> items(n);
  for (std::size_t j = 0; j < n; ++j) items[j] = j;
  shuffle_portable(items, pick);
  items.resize(round - 1);
  std::sort(items.begin(), items.end());
  rep.revealed = items;

  const S& cap = inst.capacity<S>(bin);
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(master_seed, trial + 1));
    std::vector<std::size_t> order = items;
    shuffle_portable(order, rng);
    ItemSet prefix(n);
    S load = 0;
    for (std::size_t pos = 0; pos + 1 < round; ++pos) {
      prefix.insert(order[pos]);
      if (pos + 1 <= sample) continue;
      const double draw = uniform_unit(rng);
      const auto& lp = cache->solve(prefix);
      std::vector<S> row(inst.num_bins());
      for (std::size_t i = 0; i < inst.num_bins(); ++i) row[i] = lp.primal(i, order[pos]);
      if (select_bin<S>(std::span<const S>(row), draw) == bin) load += inst.size<S>(bin, order[pos]);
    }
    if (!fits_capacity(load, cap)) ++rep.overflows;
  }
  rep.frequency = static_cast<double>(rep.overflows) / static_cast<double>(trials);
  rep.stderr_ = std::sqrt(rep.frequency * (1.0 - rep.frequency) / static_cast<double>(trials));
  rep.pass = rep.frequency <= rep.bound + 4.0 * rep.stderr_;
  return rep;
}

}  // namespace rogap
