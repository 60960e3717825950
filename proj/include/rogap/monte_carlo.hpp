#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rogap/bruteforce.hpp"
#include "rogap/errors.hpp"
#include "rogap/fractional_gap.hpp"
#include "rogap/greedy.hpp"
#include "rogap/model.hpp"
#include "rogap/numeric.hpp"
#include "rogap/online_gap.hpp"
#include "rogap/online_knapsack.hpp"
#include "rogap/random.hpp"
#include "rogap/stats.hpp"

namespace rogap {

/// Offline optimum used as ratio denominator.
template <Scalar S>
struct OptValue {
  S value = 0;
  /// True when `value` is an upper bound rather than the optimum, which makes
  /// every ratio computed from it a lower bound.
  bool conservative = false;
  std::string source;  // "bruteforce", "lp-bound" or "fractional"
};

/// Integral optimum by brute force, or the LP optimum when the search
/// exceeds `budget`.
template <Scalar S>
OptValue<S> gap_opt(const GapInstance& inst, std::uint64_t budget = kDefaultBudget) {
  if (bounded_power(inst.num_bins() + 1, inst.num_items(), budget)) {
    return {solve_integral_gap_bruteforce<S>(inst, budget).value, false, "bruteforce"};
  }
  return {solve_fractional_gap<S>(inst, ItemSet::full(inst.num_items())).objective, true, "lp-bound"};
}

/// The fractional optimum, the comparator of the fractional algorithm.
template <Scalar S>
OptValue<S> knapsack_fractional_opt(const KnapsackInstance& inst) {
  return {fractional_greedy<S>(inst).objective, false, "fractional"};
}

struct McOptions {
  std::uint64_t trials = 1000;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  std::optional<std::size_t> t;
};

struct TrialOutcome {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::string perm_digest;
  double value = 0.0;
  double opt = 0.0;
  std::optional<double> ratio;  // value / opt when opt > 0
};

struct McResult {
  std::size_t sample_size = 0;
  std::vector<TrialOutcome> trials;  // index order
  Stats value;
  Stats ratio;
  double opt = 0.0;
  bool opt_conservative = false;
  std::string opt_source;
};

/// Runs `body(state, i)` for i in [0, trials) on `workers` threads. Worker w
/// owns indices congruent to w and a private state from `make_state()`. The
/// exception of the lowest failing index is rethrown.
template <class MakeState, class Body>
void for_each_trial(std::uint64_t trials, std::size_t workers, MakeState&& make_state, Body&& body) {
  workers = std::max<std::size_t>(1, std::min<std::uint64_t>(workers, std::max<std::uint64_t>(trials, 1)));
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::uint64_t> error_index(workers, 0);
  auto work = [&](std::size_t w) {
    try {
      auto state = make_state();
      for (std::uint64_t i = w; i < trials; i += workers) {
        try {
          body(state, i);
        } catch (...) {
          errors[w] = std::current_exception();
          error_index[w] = i;
          return;
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
      error_index[w] = 0;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  std::optional<std::size_t> first;
  for (std::size_t w = 0; w < workers; ++w) {
    if (errors[w] && (!first || error_index[w] < error_index[*first])) first = w;
  }
  if (first) std::rethrow_exception(errors[*first]);
}

namespace mc_detail {

inline void require_trials(std::uint64_t trials) {
  if (trials < 1) throw Error(ErrorCode::BadArguments, "trials must be at least 1");
}

template <Scalar S>
McResult finish(std::vector<TrialOutcome> trials, const OptValue<S>& opt, std::size_t sample) {
  McResult res;
  res.sample_size = sample;
  res.opt = to_double(opt.value);
  res.opt_conservative = opt.conservative;
  res.opt_source = opt.source;
  std::vector<double> values;
  std::vector<double> ratios;
  values.reserve(trials.size());
  for (const auto& tr : trials) {
    values.push_back(tr.value);
    if (tr.ratio) ratios.push_back(*tr.ratio);
  }
  res.value = summarize(values);
  res.ratio = summarize(ratios);
  res.trials = std::move(trials);
  return res;
}

template <Scalar S>
TrialOutcome outcome(std::uint64_t i, std::uint64_t seed, const Permutation& perm, const S& value, const S& opt) {
  TrialOutcome o;
  o.trial = i;
  o.seed = seed;
  o.perm_digest = perm.digest();
  o.value = to_double(value);
  o.opt = to_double(opt);
  if (opt > S(0)) o.ratio = to_double(S(value / opt));
  return o;
}

}  // namespace mc_detail

/// Trial i draws its permutation and then its tape from an engine seeded
/// with derive_seed(master_seed, i).
template <Scalar S>
McResult mc_estimate_gap(const GapInstance& inst, GapAlgorithm algorithm, const McOptions& opts,
                         const OptValue<S>& opt) {
  mc_detail::require_trials(opts.trials);
  const std::size_t n = inst.num_items();
  const std::size_t sample = opts.t.value_or(default_gap_sample(n));
  if (sample > n) throw Error(ErrorCode::BadArguments, "sampling length exceeds n");
  std::vector<TrialOutcome> out(opts.trials);
  for_each_trial(
      opts.trials, opts.workers, [&] { return FractionalGapCache<S>(inst); },
      [&](FractionalGapCache<S>& cache, std::uint64_t i) {
        const std::uint64_t seed = derive_seed(opts.master_seed, i);
        Rng rng(seed);
        const Permutation perm = Permutation::random(n, rng);
        const RandomTape tape = RandomTape::sample(n - sample, rng);
        const auto plans = plan_rounds<S>(inst, perm, sample, cache);
        const auto choices = choices_from_tape(plans, tape);
        const auto run = run_gap_choices<S>(algorithm, inst, sample, plans, choices, tape.coin, false);
        out[i] = mc_detail::outcome<S>(i, seed, perm, run.value, opt.value);
      });
  return mc_detail::finish<S>(std::move(out), opt, sample);
}

template <Scalar S>
McResult mc_estimate_gap(const GapInstance& inst, GapAlgorithm algorithm, const McOptions& opts,
                         std::uint64_t budget = kDefaultBudget) {
  return mc_estimate_gap<S>(inst, algorithm, opts, gap_opt<S>(inst, budget));
}

template <Scalar S>
McResult mc_estimate_knapsack(const KnapsackInstance& inst, const McOptions& opts) {
  mc_detail::require_trials(opts.trials);
  const std::size_t n = inst.num_items();
  const std::size_t sample = opts.t.value_or(default_knapsack_sample(n));
  if (sample > n) throw Error(ErrorCode::BadArguments, "sampling length exceeds n");
  const OptValue<S> opt = knapsack_fractional_opt<S>(inst);
  std::vector<TrialOutcome> out(opts.trials);
  for_each_trial(
      opts.trials, opts.workers, [&] { return GreedyCache<S>(inst); },
      [&](GreedyCache<S>& cache, std::uint64_t i) {
        const std::uint64_t seed = derive_seed(opts.master_seed, i);
        Rng rng(seed);
        const Permutation perm = Permutation::random(n, rng);
        const auto run = run_fractional_knapsack_with<S>(inst, perm, sample,
                                                         [&](const ItemSet& q) { return cache.solve(q); });
        out[i] = mc_detail::outcome<S>(i, seed, perm, run.value, opt.value);
      });
  return mc_detail::finish<S>(std::move(out), opt, sample);
}

}  // namespace rogap
