#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rogap/errors.hpp"
#include "rogap/fractional_gap.hpp"
#include "rogap/item_set.hpp"
#include "rogap/model.hpp"
#include "rogap/numeric.hpp"
#include "rogap/random.hpp"

namespace rogap {

enum class GapAlgorithm { Infeasible, Feasible, Imitative, Random };

inline std::string_view to_string(GapAlgorithm a) {
  switch (a) {
    case GapAlgorithm::Infeasible: return "infeasible-gap";
    case GapAlgorithm::Feasible: return "feasible-gap";
    case GapAlgorithm::Imitative: return "imitative-gap";
    case GapAlgorithm::Random: return "random-gap";
  }
  return "?";
}

inline std::optional<GapAlgorithm> parse_gap_algorithm(std::string_view name) {
  if (name == "infeasible-gap") return GapAlgorithm::Infeasible;
  if (name == "feasible-gap") return GapAlgorithm::Feasible;
  if (name == "imitative-gap") return GapAlgorithm::Imitative;
  if (name == "random-gap") return GapAlgorithm::Random;
  return std::nullopt;
}

/// Default sampling length floor(n/2).
constexpr std::size_t default_gap_sample(std::size_t n) noexcept { return n / 2; }

/// Externalized randomness of the GAP algorithms: one uniform draw per
/// assignment round l = t+1..n (consumed whether or not the round can
/// accept) and one coin for the RandomGAP branch.
struct RandomTape {
  std::vector<double> draws;
  double coin = 0.0;

  static RandomTape sample(std::size_t rounds, Rng& rng) {
    RandomTape tape;
    tape.draws.reserve(rounds);
    for (std::size_t k = 0; k < rounds; ++k) tape.draws.push_back(uniform_unit(rng));
    tape.coin = uniform_unit(rng);
    return tape;
  }
};

/// Selected bin of a round; nullopt when no bin is selected (bin "0").
using BinChoice = std::optional<std::size_t>;

/// Inverse-CDF selection over bins in index order: bin i is returned iff
/// sum_{k<i} row_k <= draw < sum_{k<=i} row_k; the residual mass selects no
/// bin. Float rows whose sum exceeds 1 by noise have their last cumulative
/// value clamped to 1.
template <Scalar S>
BinChoice select_bin(std::span<const S> row, double draw) {
  if (!(draw >= 0.0 && draw < 1.0)) {
    throw Error(ErrorCode::BadArguments, "tape draw must lie in [0, 1)");
  }
  S total = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (is_negative_beyond(row[i], kAbsTol)) {
      throw Error(ErrorCode::BadArguments, "fractional row has a negative entry", i);
    }
    total += row[i];
  }
  if (!leq_abs(total, S(1))) {
    throw Error(ErrorCode::RowSumExceedsOne, "fractional row sums to " + format_double(to_double(total)));
  }
  const S u = scalar_from_double<S>(draw);
  S cum = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const S lo = cum;
    if (!is_negative_beyond(row[i], 0.0)) cum += row[i];
    if constexpr (!is_exact_v<S>) {
      if (cum > 1.0) cum = 1.0;
    }
    if (lo <= u && u < cum) return i;
  }
  return std::nullopt;
}

/// The data an assignment round depends on: the revealed item and its column
/// of the canonical fractional optimum over the items revealed so far.
template <Scalar S>
struct RoundPlan {
  std::size_t round = 0;  // 1-based
  std::size_t item = 0;
  std::vector<S> row;     // x~_{., item}(Q_round)
};

/// LP rows for rounds t+1..n. Depends only on (instance, order, t).
template <Scalar S>
std::vector<RoundPlan<S>> plan_rounds(const GapInstance& inst, const Permutation& perm, std::size_t t,
                                      FractionalGapCache<S>& cache) {
  const std::size_t n = inst.num_items();
  std::vector<RoundPlan<S>> plans;
  ItemSet revealed(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t item = perm[pos];
    revealed.insert(item);
    if (pos + 1 <= t) continue;
    const LpSolution<S>& lp = cache.solve(revealed);
    RoundPlan<S> plan;
    plan.round = pos + 1;
    plan.item = item;
    plan.row.reserve(inst.num_bins());
    for (std::size_t i = 0; i < inst.num_bins(); ++i) plan.row.push_back(lp.primal(i, item));
    plans.push_back(std::move(plan));
  }
  return plans;
}

template <Scalar S>
std::vector<BinChoice> choices_from_tape(const std::vector<RoundPlan<S>>& plans, const RandomTape& tape) {
  if (tape.draws.size() != plans.size()) {
    throw Error(ErrorCode::TapeLengthMismatch, "tape has " + std::to_string(tape.draws.size()) +
                                                   " draws, expected " + std::to_string(plans.size()));
  }
  std::vector<BinChoice> out;
  out.reserve(plans.size());
  for (std::size_t k = 0; k < plans.size(); ++k) {
    out.push_back(select_bin<S>(std::span<const S>(plans[k].row), tape.draws[k]));
  }
  return out;
}

template <Scalar S>
struct RoundTrace {
  std::size_t round = 0;
  std::size_t item = 0;
  std::vector<S> row;
  BinChoice selected;
  S tentative_value = 0;
  bool accepted = false;            // added to the returned assignment
  bool imitative_accepted = false;  // ImitativeGAP only: added to y
  S load_before = 0;                // selected bin of the returned assignment
  S load_after = 0;
};

template <Scalar S>
struct GapRun {
  GapAlgorithm algorithm = GapAlgorithm::Infeasible;
  /// Branch actually executed; differs from `algorithm` only for RandomGAP.
  GapAlgorithm executed = GapAlgorithm::Infeasible;
  std::size_t sample_size = 0;
  Assignment assignment;
  std::vector<RoundTrace<S>> rounds;
  /// ImitativeGAP's internal imitative assignment y.
  std::optional<Assignment> imitative;
  S value = 0;
};

/// Runs one algorithm for fixed round plans and bin choices. This is the
/// deterministic core shared by tape-driven runs and exact enumeration.
template <Scalar S>
GapRun<S> run_gap_choices(GapAlgorithm algorithm, const GapInstance& inst, std::size_t t,
                          const std::vector<RoundPlan<S>>& plans, const std::vector<BinChoice>& choices,
                          double coin = 0.0, bool record_trace = true) {
  if (choices.size() != plans.size()) {
    throw Error(ErrorCode::TapeLengthMismatch, "one bin choice per assignment round is required");
  }
  GapAlgorithm executed = algorithm;
  if (algorithm == GapAlgorithm::Random) {
    executed = coin < 0.5 ? GapAlgorithm::Feasible : GapAlgorithm::Imitative;
  }

  const std::size_t m = inst.num_bins();
  GapRun<S> run;
  run.algorithm = algorithm;
  run.executed = executed;
  run.sample_size = t;
  run.assignment = empty_assignment(inst);
  std::vector<S> loads(m, S(0));       // returned assignment (x, y or z)
  std::vector<S> imit_loads(m, S(0));  // y inside ImitativeGAP
  std::vector<std::size_t> counts(m, 0);
  if (executed == GapAlgorithm::Imitative) run.imitative = empty_assignment(inst);
  if (record_trace) run.rounds.reserve(plans.size());

  for (std::size_t k = 0; k < plans.size(); ++k) {
    const RoundPlan<S>& plan = plans[k];
    const BinChoice& pick = choices[k];
    RoundTrace<S> tr;
    if (record_trace) {
      tr.round = plan.round;
      tr.item = plan.item;
      tr.row = plan.row;
      tr.selected = pick;
    }
    if (pick) {
      const std::size_t i = *pick;
      if (i >= m) throw Error(ErrorCode::IndexOutOfRange, "bin choice out of range", i);
      const std::size_t j = plan.item;
      const S& s = inst.size<S>(i, j);
      const S& cap = inst.capacity<S>(i);
      tr.tentative_value = inst.value<S>(i, j);
      tr.load_before = loads[i];
      switch (executed) {
        case GapAlgorithm::Infeasible:
          // Tested against the load of previous rounds only.
          tr.accepted = fits_capacity(loads[i], cap);
          break;
        case GapAlgorithm::Feasible:
          tr.accepted = fits_capacity(S(loads[i] + s), cap);
          break;
        case GapAlgorithm::Imitative: {
          if (fits_capacity(S(imit_loads[i] + s), cap)) {
            tr.imitative_accepted = true;
            imit_loads[i] += s;
            (*run.imitative)(i, j) = 1;
          } else {
            // z takes only the first item y rejects in this bin.
            tr.accepted = counts[i] == 0;
          }
          break;
        }
        case GapAlgorithm::Random:
          break;
      }
      if (tr.accepted) {
        run.assignment(i, j) = 1;
        loads[i] += s;
        ++counts[i];
        run.value += tr.tentative_value;
      }
      tr.load_after = loads[i];
    }
    if (record_trace) run.rounds.push_back(std::move(tr));
  }
  return run;
}

namespace online_gap_detail {

inline std::size_t resolve_sample(std::size_t n, std::optional<std::size_t> t) {
  const std::size_t s = t.value_or(default_gap_sample(n));
  if (s > n) throw Error(ErrorCode::BadArguments, "sampling length exceeds n");
  return s;
}

}  // namespace online_gap_detail

/// Tape-driven entry point; `cache` may be shared by calls on the same
/// instance to avoid re-solving LPs for repeated item sets.
template <Scalar S>
GapRun<S> run_gap(GapAlgorithm algorithm, const GapInstance& inst, const Permutation& perm,
                  const RandomTape& tape, std::optional<std::size_t> t = std::nullopt,
                  FractionalGapCache<S>* cache = nullptr) {
  if (perm.size() != inst.num_items()) {
    throw Error(ErrorCode::DimensionMismatch, "permutation length differs from the number of items");
  }
  const std::size_t sample = online_gap_detail::resolve_sample(inst.num_items(), t);
  if (tape.draws.size() != inst.num_items() - sample) {
    throw Error(ErrorCode::TapeLengthMismatch, "tape must hold n - t = " +
                                                   std::to_string(inst.num_items() - sample) + " draws");
  }
  if (!(tape.coin >= 0.0 && tape.coin < 1.0)) throw Error(ErrorCode::BadArguments, "coin must lie in [0, 1)");
  std::optional<FractionalGapCache<S>> local;
  if (!cache) cache = &local.emplace(inst);
  const auto plans = plan_rounds<S>(inst, perm, sample, *cache);
  const auto choices = choices_from_tape(plans, tape);
  return run_gap_choices<S>(algorithm, inst, sample, plans, choices, tape.coin);
}

template <Scalar S>
GapRun<S> run_infeasible_gap(const GapInstance& inst, const Permutation& perm, const RandomTape& tape,
                             std::optional<std::size_t> t = std::nullopt) {
  return run_gap<S>(GapAlgorithm::Infeasible, inst, perm, tape, t);
}

template <Scalar S>
GapRun<S> run_feasible_gap(const GapInstance& inst, const Permutation& perm, const RandomTape& tape,
                           std::optional<std::size_t> t = std::nullopt) {
  return run_gap<S>(GapAlgorithm::Feasible, inst, perm, tape, t);
}

template <Scalar S>
GapRun<S> run_imitative_gap(const GapInstance& inst, const Permutation& perm, const RandomTape& tape,
                            std::optional<std::size_t> t = std::nullopt) {
  return run_gap<S>(GapAlgorithm::Imitative, inst, perm, tape, t);
}

/// Feasible branch when coin < 1/2, imitative branch otherwise, same tape.
template <Scalar S>
GapRun<S> run_random_gap(const GapInstance& inst, const Permutation& perm, const RandomTape& tape,
                         std::optional<std::size_t> t = std::nullopt) {
  return run_gap<S>(GapAlgorithm::Random, inst, perm, tape, t);
}

}  // namespace rogap
