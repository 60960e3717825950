#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rogap/bounds.hpp"
#include "rogap/bruteforce.hpp"
#include "rogap/checks.hpp"
#include "rogap/errors.hpp"
#include "rogap/exact.hpp"
#include "rogap/generators.hpp"
#include "rogap/instance_io.hpp"
#include "rogap/model.hpp"
#include "rogap/numeric.hpp"
#include "rogap/online_gap.hpp"
#include "rogap/online_knapsack.hpp"
#include "rogap/random.hpp"

namespace rogap {

// ---------------------------------------------------------------------------
// Randomized corpora

struct CorpusGap {
  GapInstance inst;
  std::string label;
};

struct CorpusKnapsack {
  KnapsackInstance inst;
  std::string label;
};

/// A random GAP instance with n in [n_lo, n_hi] and m in [m_lo, m_hi] from
/// one of four families: uniform, identical bins built from a knapsack
/// family, unit sizes, and large items relative to capacity.
inline CorpusGap corpus_gap(std::uint64_t seed, std::size_t n_lo, std::size_t n_hi, std::size_t m_lo,
                            std::size_t m_hi) {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(uniform_int(rng, static_cast<std::int64_t>(n_lo),
                                                      static_cast<std::int64_t>(n_hi)));
  const auto m = static_cast<std::size_t>(uniform_int(rng, static_cast<std::int64_t>(m_lo),
                                                      static_cast<std::int64_t>(m_hi)));
  const std::uint64_t inner = rng();
  const std::string dims = " n=" + std::to_string(n) + " m=" + std::to_string(m) + " seed=" + std::to_string(inner);
  switch (uniform_below(rng, 4)) {
    case 0: {
      GapRanges r{0, 20, 1, 10, 10, 20};
      return {gen_uniform_gap(n, m, inner, r), "uniform" + dims};
    }
    case 1: {
      const auto family = static_cast<KnapsackFamily>(uniform_below(rng, 4));
      KnapsackParams p;
      p.range = 20;
      const auto k = gen_knapsack_family(family, n, inner, p);
      GapCandidate c;
      c.capacities.assign(m, k.capacity_exact());
      c.values.assign(m, k.values());
      c.sizes.assign(m, k.sizes());
      return {validate_gap(c), "identical-bins:" + std::string(to_string(family)) + dims};
    }
    case 2: {
      Rng inner_rng(inner);
      GapCandidate c;
      for (std::size_t i = 0; i < m; ++i) c.capacities.emplace_back(uniform_int(inner_rng, 1, 3));
      c.values.assign(m, std::vector<Rational>(n));
      c.sizes.assign(m, std::vector<Rational>(n, Rational(1)));
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) c.values[i][j] = Rational(uniform_int(inner_rng, 0, 10));
      }
      return {validate_gap(c), "unit-size" + dims};
    }
    default: {
      GapRanges r{1, 30, 4, 10, 10, 14};
      return {gen_uniform_gap(n, m, inner, r), "large-items" + dims};
    }
  }
}

/// A random knapsack instance with n in [n_lo, n_hi] from the four standard
/// families or unit sizes with i.i.d. values.
inline CorpusKnapsack corpus_knapsack(std::uint64_t seed, std::size_t n_lo, std::size_t n_hi) {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(uniform_int(rng, static_cast<std::int64_t>(n_lo),
                                                      static_cast<std::int64_t>(n_hi)));
  const std::uint64_t inner = rng();
  const std::string dims = " n=" + std::to_string(n) + " seed=" + std::to_string(inner);
  const auto pick = uniform_below(rng, 5);
  if (pick == 4) {
    return {gen_unit_iid(n, parse_distribution("uniform:1,10"), inner), "unit-iid:uniform:1,10" + dims};
  }
  const auto family = static_cast<KnapsackFamily>(pick);
  KnapsackParams p;
  p.range = 20;
  return {gen_knapsack_family(family, n, inner, p), std::string(to_string(family)) + dims};
}

// ---------------------------------------------------------------------------
// Suite results

struct SuiteOptions {
  std::uint64_t trials = 1000;  // triples, pairs, or samples per cell
  std::uint64_t seed = 0;
  std::size_t instances = 0;    // exact corpus size; 0 selects the suite default
  std::size_t block = 20;       // consecutive trials sharing one instance
  std::size_t cells = 0;        // lemma2 cells; 0 selects the default
  std::uint64_t budget = kDefaultBudget;
};

struct SuiteReport {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> counterexamples;  // first few failures
  std::vector<std::string> lines;            // per-cell or summary details

  bool passed() const { return failures == 0 && cases > 0; }

  void fail(std::string what) {
    ++failures;
    if (counterexamples.size() < 5) counterexamples.push_back(std::move(what));
  }
};

inline constexpr std::string_view kSuiteNames[] = {"feasibility", "coupling", "lemma2", "lemma3", "lemma4",
                                                   "eq1"};

namespace suites_detail {

inline std::string instance_digest(const GapInstance& inst) { return digest_bytes(save_instance(inst)); }
inline std::string instance_digest(const KnapsackInstance& inst) { return digest_bytes(save_instance(inst)); }

inline std::string format_perm(const Permutation& perm) {
  std::string s = "[";
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(perm[k] + 1);
  }
  return s + "]";
}

inline std::string format_tape(const RandomTape& tape) {
  std::string s = "[";
  for (std::size_t k = 0; k < tape.draws.size(); ++k) {
    if (k) s += ",";
    s += format_double(tape.draws[k]);
  }
  return s + "] coin=" + format_double(tape.coin);
}

template <class Inst>
std::string describe(const Inst& inst, const std::string& label) {
  return "instance=" + instance_digest(inst) + " (" + label + ")";
}

inline std::string choices_text(const std::vector<BinChoice>& choices) {
  std::string s = "[";
  for (std::size_t k = 0; k < choices.size(); ++k) {
    if (k) s += ",";
    s += choices[k] ? std::to_string(*choices[k] + 1) : "0";
  }
  return s + "]";
}

template <Scalar S>
std::string show(const S& v) {
  if constexpr (is_exact_v<S>) return format_rational(v);
  else return format_double(v);
}

/// Iterates over `trials` random (instance, order, tape) triples; each block
/// of consecutive trials shares one instance and one LP memo.
template <Scalar S, class Body>
void for_each_triple(const SuiteOptions& opt, std::size_t n_lo, std::size_t n_hi, std::size_t m_lo,
                     std::size_t m_hi, Body&& body) {
  const std::size_t block = std::max<std::size_t>(1, opt.block);
  std::optional<CorpusGap> current;
  std::optional<FractionalGapCache<S>> cache;
  std::uint64_t current_block = ~std::uint64_t{0};
  for (std::uint64_t i = 0; i < opt.trials; ++i) {
    const std::uint64_t b = i / block;
    const std::uint64_t inst_seed = derive_seed(opt.seed, 2 * b);
    if (b != current_block) {
      current.reset();
      cache.reset();
      current.emplace(corpus_gap(inst_seed, n_lo, n_hi, m_lo, m_hi));
      cache.emplace(current->inst);
      current_block = b;
    }
    const GapInstance& inst = current->inst;
    const std::size_t n = inst.num_items();
    const std::size_t t = default_gap_sample(n);
    Rng rng(derive_seed(inst_seed + 1, i));
    const Permutation perm = Permutation::random(n, rng);
    const RandomTape tape = RandomTape::sample(n - t, rng);
    const auto plans = plan_rounds<S>(inst, perm, t, *cache);
    const auto choices = choices_from_tape(plans, tape);
    body(*current, t, perm, tape, plans, choices);
  }
}

}  // namespace suites_detail

// ---------------------------------------------------------------------------
// Suites

/// Feasible, imitative and random outputs satisfy C1-C3; the infeasible
/// output satisfies C2-C3 with removable per-bin overflow.
template <Scalar S>
SuiteReport feasibility_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.name = "feasibility";
  suites_detail::for_each_triple<S>(
      opt, 2, 10, 1, 3,
      [&](const CorpusGap& c, std::size_t t, const Permutation& perm, const RandomTape& tape,
          const std::vector<RoundPlan<S>>& plans, const std::vector<BinChoice>& choices) {
        ++rep.cases;
        const auto& inst = c.inst;
        const auto x = run_gap_choices<S>(GapAlgorithm::Infeasible, inst, t, plans, choices, 0.0, false);
        const auto y = run_gap_choices<S>(GapAlgorithm::Feasible, inst, t, plans, choices, 0.0, false);
        const auto z = run_gap_choices<S>(GapAlgorithm::Imitative, inst, t, plans, choices, 0.0, false);
        const auto r = run_gap_choices<S>(GapAlgorithm::Random, inst, t, plans, choices, tape.coin, false);
        std::vector<std::pair<std::string, CheckResult>> results;
        results.emplace_back("infeasible-gap", check_infeasible_output<S>(inst, perm, x.assignment));
        results.emplace_back("feasible-gap", check_feasible_output<S>(inst, y.assignment));
        results.emplace_back("imitative-gap", check_feasible_output<S>(inst, z.assignment, true));
        results.emplace_back("random-gap", check_feasible_output<S>(inst, r.assignment));
        if (!(*z.imitative == y.assignment)) {
          results.emplace_back("imitative-gap", CheckResult::fail("internal y differs from feasible-gap"));
        }
        const auto& branch = tape.coin < 0.5 ? y.assignment : z.assignment;
        if (!(r.assignment == branch)) {
          results.emplace_back("random-gap", CheckResult::fail("output differs from the branch its coin selects"));
        }
        for (const auto& [alg, res] : results) {
          if (res.ok) continue;
          rep.fail(alg + ": " + res.detail + "; " + suites_detail::describe(inst, c.label) +
                   " perm=" + suites_detail::format_perm(perm) + " tape=" + suites_detail::format_tape(tape));
          break;
        }
      });
  rep.lines.push_back(std::to_string(rep.cases) + " triples, " + std::to_string(rep.failures) + " violations");
  return rep;
}

/// Pointwise coupling on random triples, then on every outcome of a corpus
/// of instances with n <= 5 and m <= 2 by exhaustive enumeration.
template <Scalar S>
SuiteReport coupling_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.name = "coupling";
  std::uint64_t sampled = 0;
  suites_detail::for_each_triple<S>(
      opt, 2, 10, 1, 3,
      [&](const CorpusGap& c, std::size_t t, const Permutation& perm, const RandomTape& tape,
          const std::vector<RoundPlan<S>>& plans, const std::vector<BinChoice>& choices) {
        ++rep.cases;
        ++sampled;
        const auto& inst = c.inst;
        const auto x = run_gap_choices<S>(GapAlgorithm::Infeasible, inst, t, plans, choices, 0.0, false);
        const auto y = run_gap_choices<S>(GapAlgorithm::Feasible, inst, t, plans, choices, 0.0, false);
        const auto z = run_gap_choices<S>(GapAlgorithm::Imitative, inst, t, plans, choices, 0.0, false);
        const auto res = check_coupling<S>(inst, perm, x.assignment, y.assignment, z.assignment);
        if (!res.ok) {
          rep.fail(res.detail + "; " + suites_detail::describe(inst, c.label) + " perm=" +
                   suites_detail::format_perm(perm) + " tape=" + suites_detail::format_tape(tape));
        }
      });

  const std::size_t instances = opt.instances ? opt.instances : 20;
  std::uint64_t outcomes = 0;
  for (std::size_t k = 0; k < instances; ++k) {
    const auto c = corpus_gap(derive_seed(opt.seed, 2 * k + 1) ^ 0x5eedc0de, 2, 5, 1, 2);
    const auto exact = exact_expectation_gap<S>(
        c.inst, std::nullopt, opt.budget,
        [&](const Permutation& perm, const auto&, const std::vector<BinChoice>& choices, const GapRun<S>& x,
            const GapRun<S>& y, const GapRun<S>& z) {
          ++rep.cases;
          ++outcomes;
          const auto res = check_coupling<S>(c.inst, perm, x.assignment, y.assignment, z.assignment);
          if (!res.ok) {
            rep.fail(res.detail + "; " + suites_detail::describe(c.inst, c.label) + " perm=" +
                     suites_detail::format_perm(perm) + " bins=" + suites_detail::choices_text(choices));
          }
        });
    if (is_negative_beyond(S(S(2) * exact.random - exact.infeasible), kAbsTol)) {
      rep.fail("E[random-gap] < E[infeasible-gap]/2; " + suites_detail::describe(c.inst, c.label));
    }
  }
  rep.lines.push_back(std::to_string(sampled) + " sampled triples, " + std::to_string(outcomes) +
                      " enumerated outcomes on " + std::to_string(instances) + " instances, " +
                      std::to_string(rep.failures) + " violations");
  return rep;
}

/// Monte Carlo overflow frequency against the harmonic bound on random
/// (instance, round, bin) cells.
template <Scalar S>
SuiteReport lemma2_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.name = "lemma2";
  const std::size_t cells = opt.cells ? opt.cells : 10;
  for (std::size_t k = 0; k < cells; ++k) {
    const std::uint64_t cell_seed = derive_seed(opt.seed, k);
    const auto c = corpus_gap(cell_seed, 4, 10, 1, 3);
    const std::size_t n = c.inst.num_items();
    const std::size_t t = default_gap_sample(n);
    Rng rng(cell_seed ^ 0x1e11a2);
    const auto round = static_cast<std::size_t>(
        uniform_int(rng, static_cast<std::int64_t>(std::min(t + 2, n)), static_cast<std::int64_t>(n)));
    const auto bin = static_cast<std::size_t>(uniform_below(rng, c.inst.num_bins()));
    const auto r = verify_lemma2<S>(c.inst, round, bin, opt.trials, derive_seed(cell_seed, 1));
    ++rep.cases;
    std::string line = suites_detail::describe(c.inst, c.label) + " l=" + std::to_string(round) +
                       " bin=" + std::to_string(bin + 1) + " frequency=" + format_double(r.frequency) +
                       " stderr=" + format_double(r.stderr_) + " bound=" + format_double(r.bound) +
                       (r.pass ? " pass" : " FAIL");
    if (!r.pass) rep.fail(line);
    rep.lines.push_back(std::move(line));
  }
  return rep;
}

/// Exact expectation of the infeasible algorithm against the finite-n
/// bound times the integral optimum, on n in {4,5,6} and m in {1,2}; the
/// random algorithm against half of it.
template <Scalar S>
SuiteReport lemma3_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.name = "lemma3";
  const std::size_t instances = opt.instances ? opt.instances : 50;
  std::optional<double> worst_margin;
  for (std::size_t k = 0; k < instances; ++k) {
    const std::size_t n = 4 + k % 3;
    const std::size_t m = 1 + (k / 3) % 2;
    const auto c = corpus_gap(derive_seed(opt.seed, k), n, n, m, m);
    const std::size_t t = default_gap_sample(n);
    const auto exact = exact_expectation_gap<S>(c.inst, t, opt.budget);
    const S opt_value = solve_integral_gap_bruteforce<S>(c.inst, opt.budget).value;
    const S bound = lemma3_bound<S>(n, t);
    ++rep.cases;
    const S need = bound * opt_value;
    if (is_negative_beyond(S(exact.infeasible - need), kAbsTol)) {
      rep.fail("E[v(x)] = " + suites_detail::show(exact.infeasible) + " < " + suites_detail::show(need) + "; " +
               suites_detail::describe(c.inst, c.label));
    }
    if (is_negative_beyond(S(exact.random - need / S(2)), kAbsTol)) {
      rep.fail("E[random-gap] = " + suites_detail::show(exact.random) + " < " + suites_detail::show(S(need / S(2))) +
               "; " + suites_detail::describe(c.inst, c.label));
    }
    if (opt_value > S(0)) {
      const double margin = to_double(S(exact.infeasible / opt_value - bound));
      if (!worst_margin || margin < *worst_margin) worst_margin = margin;
    }
  }
  rep.lines.push_back(std::to_string(rep.cases) + " instances, " + std::to_string(rep.failures) +
                      " violations, smallest E[v(x)]/OPT - bound = " +
                      (worst_margin ? format_double(*worst_margin) : std::string("n/a")));
  return rep;
}

/// Exact per-item and total guarantees of the fractional knapsack algorithm
/// on n in [3, 7], plus the pointwise run checks on every order.
template <Scalar S>
SuiteReport lemma4_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.name = "lemma4";
  const std::size_t instances = opt.instances ? opt.instances : 50;
  std::optional<double> worst_margin;
  for (std::size_t k = 0; k < instances; ++k) {
    const std::size_t n = 3 + k % 5;
    const auto c = corpus_knapsack(derive_seed(opt.seed, k), n, n);
    const std::size_t t = default_knapsack_sample(n);
    std::uint64_t run_failures = 0;
    const auto exact = exact_expectation_knapsack<S>(
        c.inst, t, opt.budget, [&](const Permutation& perm, const KnapsackRun<S>& run) {
          const auto res = check_knapsack_run<S>(c.inst, perm, run);
          if (!res.ok && run_failures++ == 0) {
            rep.fail(res.detail + "; " + suites_detail::describe(c.inst, c.label) + " perm=" +
                     suites_detail::format_perm(perm));
          }
        });
    ++rep.cases;
    const S factor = lemma4_factor<S>(n, t);
    for (std::size_t j = 0; j < n; ++j) {
      const S need = factor * exact.greedy_full[j];
      if (is_negative_beyond(S(exact.fractions[j] - need), kAbsTol)) {
        rep.fail("E[x_" + std::to_string(j + 1) + "] = " + suites_detail::show(exact.fractions[j]) + " < " +
                 suites_detail::show(need) + "; " + suites_detail::describe(c.inst, c.label));
      }
    }
    const S bound = theorem2_bound<S>(n, t);
    if (is_negative_beyond(S(exact.value - bound * exact.greedy_value), kAbsTol)) {
      rep.fail("E[v(x)] = " + suites_detail::show(exact.value) + " below the bound; " +
               suites_detail::describe(c.inst, c.label));
    }
    if (exact.greedy_value > S(0)) {
      const double margin = to_double(S(exact.value / exact.greedy_value - bound));
      if (!worst_margin || margin < *worst_margin) worst_margin = margin;
    }
  }
  rep.lines.push_back(std::to_string(rep.cases) + " instances, " + std::to_string(rep.failures) +
                      " violations, smallest E[v(x)]/v(x~) - bound = " +
                      (worst_margin ? format_double(*worst_margin) : std::string("n/a")));
  return rep;
}

/// Pointwise displacement inequality, pre-clamp fractions and capacity on
/// random (instance, order) pairs.
template <Scalar S>
SuiteReport eq1_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.name = "eq1";
  const std::size_t block = std::max<std::size_t>(1, opt.block);
  std::optional<CorpusKnapsack> current;
  std::optional<GreedyCache<S>> cache;
  std::uint64_t current_block = ~std::uint64_t{0};
  for (std::uint64_t i = 0; i < opt.trials; ++i) {
    const std::uint64_t b = i / block;
    const std::uint64_t inst_seed = derive_seed(opt.seed, 2 * b);
    if (b != current_block) {
      cache.reset();
      current.emplace(corpus_knapsack(inst_seed, 1, 12));
      cache.emplace(current->inst);
      current_block = b;
    }
    const auto& inst = current->inst;
    Rng rng(derive_seed(inst_seed + 1, i));
    const Permutation perm = Permutation::random(inst.num_items(), rng);
    ++rep.cases;
    CheckResult res;
    try {
      const auto run = run_fractional_knapsack_with<S>(inst, perm, std::nullopt,
                                                       [&](const ItemSet& q) { return cache->solve(q); });
      res = check_knapsack_run<S>(inst, perm, run);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvariantViolation && e.code() != ErrorCode::NegativeSummand) throw;
      res = CheckResult::fail(e.what());
    }
    if (!res.ok) {
      rep.fail(res.detail + "; " + suites_detail::describe(inst, current->label) + " perm=" +
               suites_detail::format_perm(perm));
    }
  }
  rep.lines.push_back(std::to_string(rep.cases) + " pairs, " + std::to_string(rep.failures) + " violations");
  return rep;
}

template <Scalar S>
SuiteReport run_suite(std::string_view name, const SuiteOptions& opt) {
  if (name == "feasibility") return feasibility_suite<S>(opt);
  if (name == "coupling") return coupling_suite<S>(opt);
  if (name == "lemma2") return lemma2_suite<S>(opt);
  if (name == "lemma3") return lemma3_suite<S>(opt);
  if (name == "lemma4") return lemma4_suite<S>(opt);
  if (name == "eq1") return eq1_suite<S>(opt);
  throw Error(ErrorCode::BadArguments, "unknown suite '" + std::string(name) + "'");
}

inline SuiteReport run_suite(std::string_view name, const SuiteOptions& opt, Arithmetic arithmetic) {
  return arithmetic == Arithmetic::Rational ? run_suite<Rational>(name, opt) : run_suite<double>(name, opt);
}

}  // namespace rogap
