#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "rogap/bounds.hpp"
#include "rogap/checks.hpp"
#include "rogap/errors.hpp"
#include "rogap/exact.hpp"
#include "rogap/generator_spec.hpp"
#include "rogap/instance_io.hpp"
#include "rogap/monte_carlo.hpp"
#include "rogap/numeric.hpp"
#include "rogap/online_gap.hpp"
#include "rogap/online_knapsack.hpp"
#include "rogap/stats.hpp"

namespace rogap {

enum class Mode { Exact, MonteCarlo };
enum class ReportFormat { Json, Csv };

inline constexpr std::string_view kFractionalKnapsack = "fractional-knapsack";

struct ExperimentConfig {
  std::string instance_path;  // exactly one of instance_path / generator
  std::string generator;
  std::string algorithm = "random-gap";
  Mode mode = Mode::MonteCarlo;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  std::optional<std::size_t> t;
  Arithmetic arithmetic = Arithmetic::Float;
  std::uint64_t budget = kDefaultBudget;
  /// Not part of the report: results do not depend on it.
  std::size_t workers = 1;
};

struct BoundComparison {
  std::string name;
  std::string kind;  // "finite-n" or "asymptotic"
  double value = 0.0;
  std::string applies_to;       // what is compared against the bound
  std::optional<double> observed;
  std::optional<bool> pass;     // null for context entries
  std::optional<double> margin; // observed - value
};

struct LemmaCheck {
  std::string name;
  bool pass = true;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string detail;
};

struct ExactSection {
  double expected_value = 0.0;
  std::optional<std::string> expected_value_exact;  // rational mode only
  std::vector<std::pair<std::string, double>> branches;
  std::vector<double> expected_fractions;  // knapsack only
  std::uint64_t permutations = 0;
  std::uint64_t outcomes = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string instance_kind;
  std::size_t num_items = 0;
  std::size_t num_bins = 0;
  std::string instance_digest;
  std::size_t sample_size = 0;
  double opt = 0.0;
  std::optional<std::string> opt_exact;
  std::string opt_source;
  bool opt_conservative = false;
  std::optional<double> ratio;  // exact mode: E/OPT; MC mode: mean ratio
  std::optional<ExactSection> exact;
  std::optional<McResult> mc;
  std::vector<BoundComparison> bounds;
  std::vector<LemmaCheck> lemma_checks;
};

inline std::string_view to_string(Mode m) { return m == Mode::Exact ? "exact" : "mc"; }
inline std::string_view to_string(Arithmetic a) { return a == Arithmetic::Rational ? "rational" : "float"; }
inline std::string_view to_string(ReportFormat f) { return f == ReportFormat::Json ? "json" : "csv"; }

inline std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "exact") return Mode::Exact;
  if (s == "mc") return Mode::MonteCarlo;
  return std::nullopt;
}
inline std::optional<Arithmetic> parse_arithmetic(std::string_view s) {
  if (s == "float") return Arithmetic::Float;
  if (s == "rational") return Arithmetic::Rational;
  return std::nullopt;
}
inline std::optional<ReportFormat> parse_format(std::string_view s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  return std::nullopt;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Validates the parts of a config that do not need the instance.
inline void validate_config(const ExperimentConfig& c) {
  if (c.instance_path.empty() == c.generator.empty()) {
    throw Error(ErrorCode::ConfigError, "exactly one of an instance file or a generator spec is required");
  }
  if (c.algorithm != kFractionalKnapsack && !parse_gap_algorithm(c.algorithm)) {
    throw Error(ErrorCode::ConfigError, "unknown algorithm '" + c.algorithm + "'");
  }
  if (c.mode == Mode::MonteCarlo && c.trials < 1) throw Error(ErrorCode::ConfigError, "trials must be >= 1");
  if (!c.generator.empty()) (void)parse_generator_spec(c.generator);
}

inline AnyInstance load_experiment_instance(const ExperimentConfig& c) {
  if (!c.instance_path.empty()) return load_instance(read_file(c.instance_path));
  return generate(parse_generator_spec(c.generator), c.seed);
}

namespace experiment_detail {

template <Scalar S>
std::optional<std::string> exact_text(const S& v) {
  if constexpr (is_exact_v<S>) return format_rational(v);
  else return std::nullopt;
}

inline void require_sample(std::size_t n, const std::optional<std::size_t>& t) {
  if (t && (*t < 1 || *t + 1 > n)) {
    throw Error(ErrorCode::ConfigError, "t must lie in [1, n-1] = [1, " + std::to_string(n == 0 ? 0 : n - 1) + "]");
  }
}

inline BoundComparison compare(std::string name, std::string kind, double value, std::string applies_to,
                               std::optional<double> observed, bool decide) {
  BoundComparison b{std::move(name), std::move(kind), value, std::move(applies_to), observed, {}, {}};
  if (observed) {
    b.margin = *observed - value;
    if (decide) b.pass = *observed >= value;
  }
  return b;
}

/// Observed ratio for a bound check: the exact ratio, or in MC mode the
/// upper end of a four-standard-error band around the mean ratio.
inline std::optional<double> observed_ratio(const ExperimentReport& r) {
  if (r.exact) return r.ratio;
  if (r.mc && r.mc->ratio.count > 0) {
    return r.mc->ratio.mean + 4.0 * r.mc->ratio.stderr_.value_or(0.0);
  }
  return std::nullopt;
}

template <Scalar S>
void run_gap(const GapInstance& inst, GapAlgorithm alg, const ExperimentConfig& c, ExperimentReport& r) {
  const std::size_t n = inst.num_items();
  const std::size_t t = c.t.value_or(default_gap_sample(n));
  r.sample_size = t;
  if (c.mode == Mode::Exact) {
    const OptValue<S> opt = gap_opt<S>(inst, c.budget);
    LemmaCheck feas;
    feas.name = "feasibility";
    auto on_outcome = [&](const Permutation& perm, const auto&, const auto&, const GapRun<S>& x,
                          const GapRun<S>& y, const GapRun<S>& z) {
      ++feas.cases;
      const bool ok = check_infeasible_output<S>(inst, perm, x.assignment).ok &&
                      check_feasible_output<S>(inst, y.assignment).ok &&
                      check_feasible_output<S>(inst, z.assignment, true).ok;
      if (!ok) ++feas.failures;
    };
    const auto e = exact_expectation_gap<S>(inst, t, c.budget, on_outcome);
    ExactSection sec;
    const S& value = e.expectation(alg);
    sec.expected_value = to_double(value);
    sec.expected_value_exact = exact_text(value);
    for (auto a : {GapAlgorithm::Infeasible, GapAlgorithm::Feasible, GapAlgorithm::Imitative, GapAlgorithm::Random}) {
      sec.branches.emplace_back(std::string(to_string(a)), to_double(e.expectation(a)));
    }
    sec.permutations = e.permutations;
    sec.outcomes = e.outcomes;
    r.exact = std::move(sec);
    r.opt = to_double(opt.value);
    r.opt_exact = exact_text(opt.value);
    r.opt_source = opt.source;
    r.opt_conservative = opt.conservative;
    if (opt.value > S(0)) r.ratio = to_double(S(value / opt.value));

    LemmaCheck coupling{"coupling", e.coupling_violations == 0, e.outcomes, e.coupling_violations,
                        "v(y) + v(z) >= v(x) on every enumerated outcome"};
    feas.pass = feas.failures == 0;
    feas.detail = "C1-C3 for feasible and imitative outputs, removable overflow for the infeasible output";
    const bool identity = e.random == (e.feasible + e.imitative) / S(2);
    LemmaCheck branches{"random-gap-branches", identity, 1, identity ? 0u : 1u,
                        "E[random-gap] = (E[feasible-gap] + E[imitative-gap]) / 2"};
    r.lemma_checks = {coupling, feas, branches};
    if (opt.value > S(0) && t >= 1 && t < n) {
      const S need = lemma3_bound<S>(n, t) * opt.value;
      const bool ok = !is_negative_beyond(S(e.infeasible - need), kAbsTol);
      r.lemma_checks.push_back({"lemma3", ok, 1, ok ? 0u : 1u, "E[v(infeasible-gap)] >= bound * OPT"});
    }
  } else {
    McOptions o{c.trials, c.seed, c.workers, t};
    const OptValue<S> opt = gap_opt<S>(inst, c.budget);
    r.mc = mc_estimate_gap<S>(inst, alg, o, opt);
    r.opt = r.mc->opt;
    r.opt_exact = exact_text(opt.value);
    r.opt_source = opt.source;
    r.opt_conservative = opt.conservative;
    if (r.mc->ratio.count > 0) r.ratio = r.mc->ratio.mean;
    if (t >= 1 && t < n) {
      for (std::size_t bin = 0; bin < inst.num_bins(); ++bin) {
        const auto l2 = verify_lemma2<S>(inst, n, bin, c.trials, derive_seed(c.seed, 0x1e11a2 + bin), t);
        r.lemma_checks.push_back({"lemma2", l2.pass, l2.trials, l2.pass ? 0u : 1u,
                                  "bin " + std::to_string(bin + 1) + " l=" + std::to_string(n) + " overflows=" +
                                      std::to_string(l2.overflows) + " frequency=" +
                                      format_double(l2.frequency) + " stderr=" + format_double(l2.stderr_) +
                                      " bound=" + format_double(l2.bound)});
      }
    }
  }

  if (t >= 1 && t < n) {
    const double l3 = to_double(lemma3_bound<S>(n, t));
    const auto observed = observed_ratio(r);
    if (alg == GapAlgorithm::Infeasible) {
      r.bounds.push_back(compare("lemma3", "finite-n", l3, "ratio", observed, true));
    } else if (alg == GapAlgorithm::Random) {
      r.bounds.push_back(compare("half-lemma3", "finite-n", l3 / 2.0, "ratio", observed, true));
    } else {
      r.bounds.push_back(compare("lemma3", "finite-n", l3, "ratio", observed, false));
    }
  }
  r.bounds.push_back(compare("one-minus-ln2", "asymptotic", kOneMinusLn2, "ratio", r.ratio, false));
  r.bounds.push_back(compare("half-one-minus-ln2", "asymptotic", kHalfOneMinusLn2, "ratio", r.ratio, false));
}

template <Scalar S>
void run_knapsack(const KnapsackInstance& inst, const ExperimentConfig& c, ExperimentReport& r) {
  const std::size_t n = inst.num_items();
  const std::size_t t = c.t.value_or(default_knapsack_sample(n));
  r.sample_size = t;
  const OptValue<S> opt = knapsack_fractional_opt<S>(inst);
  r.opt = to_double(opt.value);
  r.opt_exact = exact_text(opt.value);
  r.opt_source = opt.source;
  if (c.mode == Mode::Exact) {
    LemmaCheck eq1;
    eq1.name = "eq1";
    eq1.detail = "displacement inequality, fractions in [0, 1], packed size within capacity";
    const auto e = exact_expectation_knapsack<S>(inst, t, c.budget,
                                                 [&](const Permutation& perm, const KnapsackRun<S>& run) {
                                                   ++eq1.cases;
                                                   if (!check_knapsack_run<S>(inst, perm, run).ok) ++eq1.failures;
                                                 });
    eq1.pass = eq1.failures == 0;
    ExactSection sec;
    sec.expected_value = to_double(e.value);
    sec.expected_value_exact = exact_text(e.value);
    for (const auto& f : e.fractions) sec.expected_fractions.push_back(to_double(f));
    sec.permutations = e.permutations;
    sec.outcomes = e.permutations;
    r.exact = std::move(sec);
    if (opt.value > S(0)) r.ratio = to_double(S(e.value / opt.value));
    LemmaCheck l4;
    l4.name = "lemma4";
    l4.detail = "E[x_j] >= factor * x~_j for every item";
    l4.cases = n;
    const S factor = lemma4_factor<S>(n, t);
    for (std::size_t j = 0; j < n; ++j) {
      if (is_negative_beyond(S(e.fractions[j] - factor * e.greedy_full[j]), kAbsTol)) ++l4.failures;
    }
    l4.pass = l4.failures == 0;
    r.lemma_checks = {eq1, l4};
  } else {
    McOptions o{c.trials, c.seed, c.workers, t};
    r.mc = mc_estimate_knapsack<S>(inst, o);
    if (r.mc->ratio.count > 0) r.ratio = r.mc->ratio.mean;
  }
  if (t >= 1 && t < n) {
    r.bounds.push_back(compare("theorem2", "finite-n", to_double(theorem2_bound<S>(n, t)), "ratio",
                               observed_ratio(r), true));
  }
  r.bounds.push_back(compare("inverse-e", "asymptotic", kInvE, "ratio", r.ratio, false));
}

template <Scalar S>
void dispatch(const AnyInstance& any, const ExperimentConfig& c, ExperimentReport& r) {
  if (c.algorithm == kFractionalKnapsack) {
    const auto* k = std::get_if<KnapsackInstance>(&any);
    if (!k) throw Error(ErrorCode::ConfigError, "fractional-knapsack needs a knapsack instance");
    run_knapsack<S>(*k, c, r);
    return;
  }
  const GapInstance inst = std::holds_alternative<GapInstance>(any) ? std::get<GapInstance>(any)
                                                                     : to_gap(std::get<KnapsackInstance>(any));
  run_gap<S>(inst, *parse_gap_algorithm(c.algorithm), c, r);
}

}  // namespace experiment_detail

/// Runs one experiment. The report depends only on the config (worker
/// count excluded).
inline ExperimentReport run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const AnyInstance any = load_experiment_instance(config);
  ExperimentReport r;
  r.config = config;
  r.instance_digest = digest_bytes(save_instance(any));
  if (const auto* g = std::get_if<GapInstance>(&any)) {
    r.instance_kind = "gap";
    r.num_items = g->num_items();
    r.num_bins = g->num_bins();
  } else {
    r.instance_kind = "knapsack";
    r.num_items = std::get<KnapsackInstance>(any).num_items();
    r.num_bins = 1;
  }
  experiment_detail::require_sample(r.num_items, config.t);
  if (config.arithmetic == Arithmetic::Rational) {
    experiment_detail::dispatch<Rational>(any, config, r);
  } else {
    experiment_detail::dispatch<double>(any, config, r);
  }
  return r;
}

/// True when no decided bound comparison or lemma check failed.
inline bool report_passes(const ExperimentReport& r) {
  for (const auto& b : r.bounds) {
    if (b.pass && !*b.pass) return false;
  }
  for (const auto& l : r.lemma_checks) {
    if (!l.pass) return false;
  }
  return true;
}

namespace report_detail {

using Json = nlohmann::ordered_json;

inline Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json stats_json(const Stats& s) {
  Json j;
  j["count"] = s.count;
  j["mean"] = s.mean;
  j["stderr"] = optional_number(s.stderr_);
  j["ci99"] = s.ci99 ? Json::array({s.ci99->first, s.ci99->second}) : Json(nullptr);
  return j;
}

inline Json config_json(const ExperimentConfig& c) {
  Json j;
  j["instance"] = c.instance_path.empty() ? Json(nullptr) : Json(c.instance_path);
  j["generator"] = c.generator.empty() ? Json(nullptr) : Json(to_string(parse_generator_spec(c.generator)));
  j["algorithm"] = c.algorithm;
  j["mode"] = std::string(to_string(c.mode));
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["t"] = c.t ? Json(*c.t) : Json(nullptr);
  j["arithmetic"] = std::string(to_string(c.arithmetic));
  j["budget"] = c.budget;
  return j;
}

}  // namespace report_detail

inline nlohmann::ordered_json report_to_json(const ExperimentReport& r) {
  using report_detail::Json;
  Json j;
  j["config"] = report_detail::config_json(r.config);
  Json inst;
  inst["kind"] = r.instance_kind;
  inst["items"] = r.num_items;
  inst["bins"] = r.num_bins;
  inst["digest"] = r.instance_digest;
  inst["sample_size"] = r.sample_size;
  j["instance"] = inst;
  Json opt;
  opt["value"] = r.opt;
  opt["exact"] = r.opt_exact ? Json(*r.opt_exact) : Json(nullptr);
  opt["source"] = r.opt_source;
  opt["conservative_ratio"] = r.opt_conservative;
  j["opt"] = opt;
  if (r.exact) {
    Json e;
    e["expected_value"] = r.exact->expected_value;
    e["expected_value_exact"] = r.exact->expected_value_exact ? Json(*r.exact->expected_value_exact) : Json(nullptr);
    e["ratio"] = report_detail::optional_number(r.ratio);
    if (!r.exact->branches.empty()) {
      Json b = Json::object();
      for (const auto& [name, v] : r.exact->branches) b[name] = v;
      e["branches"] = b;
    }
    if (!r.exact->expected_fractions.empty()) e["expected_fractions"] = r.exact->expected_fractions;
    e["permutations"] = r.exact->permutations;
    e["outcomes"] = r.exact->outcomes;
    j["exact"] = e;
  } else {
    j["exact"] = nullptr;
  }
  if (r.mc) {
    Json m;
    m["trials"] = r.mc->value.count;
    m["mean"] = r.mc->value.mean;
    m["stderr"] = report_detail::optional_number(r.mc->value.stderr_);
    m["ci99"] = r.mc->value.ci99 ? Json::array({r.mc->value.ci99->first, r.mc->value.ci99->second}) : Json(nullptr);
    m["ratio"] = report_detail::stats_json(r.mc->ratio);
    j["mc"] = m;
  } else {
    j["mc"] = nullptr;
  }
  Json bounds = Json::object();
  for (const auto& b : r.bounds) {
    Json e;
    e["kind"] = b.kind;
    e["value"] = b.value;
    e["compared_to"] = b.applies_to;
    e["observed"] = report_detail::optional_number(b.observed);
    e["pass"] = b.pass ? Json(*b.pass) : Json(nullptr);
    e["margin"] = report_detail::optional_number(b.margin);
    bounds[b.name] = e;
  }
  j["bounds"] = bounds;
  Json checks = Json::array();
  for (const auto& l : r.lemma_checks) {
    Json e;
    e["name"] = l.name;
    e["pass"] = l.pass;
    e["cases"] = l.cases;
    e["failures"] = l.failures;
    e["detail"] = l.detail;
    checks.push_back(e);
  }
  j["lemma_checks"] = checks;
  return j;
}

/// Serializes a report. CSV carries one row per Monte Carlo trial and a
/// footer of `#`-prefixed summary rows.
inline std::string write_report(const ExperimentReport& r, ReportFormat format) {
  if (format == ReportFormat::Json) return report_to_json(r).dump(2) + "\n";
  std::string out = "trial,seed,perm_digest,value,opt,ratio\n";
  if (r.mc) {
    for (const auto& tr : r.mc->trials) {
      out += std::to_string(tr.trial) + "," + std::to_string(tr.seed) + "," + tr.perm_digest + "," +
             format_double(tr.value) + "," + format_double(tr.opt) + "," +
             (tr.ratio ? format_double(*tr.ratio) : std::string()) + "\n";
    }
  }
  auto footer = [&](const std::string& key, const std::string& value) { out += "# " + key + "," + value + "\n"; };
  const auto& c = r.config;
  footer("algorithm", c.algorithm);
  footer("mode", std::string(to_string(c.mode)));
  footer("source", c.instance_path.empty() ? to_string(parse_generator_spec(c.generator)) : c.instance_path);
  footer("instance_digest", r.instance_digest);
  footer("seed", std::to_string(c.seed));
  footer("trials", std::to_string(c.trials));
  footer("t", std::to_string(r.sample_size));
  footer("arithmetic", std::string(to_string(c.arithmetic)));
  footer("opt", format_double(r.opt));
  footer("opt_source", r.opt_source);
  footer("conservative_ratio", r.opt_conservative ? "true" : "false");
  if (r.exact) footer("expected_value", format_double(r.exact->expected_value));
  if (r.mc) {
    footer("mean", format_double(r.mc->value.mean));
    footer("stderr", r.mc->value.stderr_ ? format_double(*r.mc->value.stderr_) : "undefined");
    if (r.mc->value.ci99) {
      footer("ci99", format_double(r.mc->value.ci99->first) + ";" + format_double(r.mc->value.ci99->second));
    }
  }
  footer("ratio", r.ratio ? format_double(*r.ratio) : "undefined");
  for (const auto& b : r.bounds) {
    footer("bound:" + b.name, format_double(b.value) + ";" + (b.pass ? (*b.pass ? "pass" : "fail") : "context"));
  }
  for (const auto& l : r.lemma_checks) footer("check:" + l.name, l.pass ? "pass" : "fail");
  return out;
}

/// One line per bound and check, for standard output.
inline std::string summarize_report(const ExperimentReport& r) {
  std::string s = std::string(r.config.algorithm) + " on " + r.instance_kind + " instance " + r.instance_digest +
                  " (n=" + std::to_string(r.num_items) + ", m=" + std::to_string(r.num_bins) +
                  ", t=" + std::to_string(r.sample_size) + ")\n";
  if (r.exact) s += "  expected value " + format_double(r.exact->expected_value) + "\n";
  if (r.mc) {
    s += "  mean value " + format_double(r.mc->value.mean) + " over " + std::to_string(r.mc->value.count) +
         " trials, stderr " + (r.mc->value.stderr_ ? format_double(*r.mc->value.stderr_) : "undefined") + "\n";
  }
  s += "  opt " + format_double(r.opt) + " (" + r.opt_source + (r.opt_conservative ? ", conservative ratio" : "") +
       ")\n";
  s += "  ratio " + (r.ratio ? format_double(*r.ratio) : std::string("undefined")) + "\n";
  for (const auto& b : r.bounds) {
    s += "  bound " + b.name + " = " + format_double(b.value) + ": " +
         (b.pass ? (*b.pass ? "pass" : "FAIL") : std::string("context")) +
         (b.margin ? " (margin " + format_double(*b.margin) + ")" : std::string()) + "\n";
  }
  for (const auto& l : r.lemma_checks) {
    s += "  check " + l.name + ": " + (l.pass ? "pass" : "FAIL") + " (" + std::to_string(l.cases) + " cases, " +
         std::to_string(l.failures) + " failures)\n";
  }
  return s;
}

}  // namespace rogap
