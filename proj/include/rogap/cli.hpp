#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rogap/bruteforce.hpp"
#include "rogap/errors.hpp"
#include "rogap/experiment.hpp"
#include "rogap/fractional_gap.hpp"
#include "rogap/generator_spec.hpp"
#include "rogap/greedy.hpp"
#include "rogap/instance_io.hpp"
#include "rogap/suites.hpp"
#include "rogap/trace.hpp"

namespace rogap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kBudgetEnv = "ROGAP_BUDGET";

/// Raised for argument and configuration problems (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using Json = nlohmann::ordered_json;

inline std::uint64_t default_budget() {
  const char* env = std::getenv(kBudgetEnv);
  if (!env || !*env) return kDefaultBudget;
  const std::string text(env);
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.front() == '-') {
    throw UsageError(std::string(kBudgetEnv) + " must be a nonnegative integer, got '" + text + "'");
  }
  return v;
}

inline void write_output(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << bytes;
  out.flush();
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
}

/// Machine-readable bytes go to `out_path`, or to stdout when no path is set.
inline void emit(const std::string& out_path, const std::string& bytes, std::ostream& out) {
  if (out_path.empty()) out << bytes;
  else write_output(out_path, bytes);
}

/// Human summary goes to stdout when the data went to a file, else stderr.
inline std::ostream& summary_stream(const std::string& out_path, std::ostream& out, std::ostream& err) {
  return out_path.empty() ? err : out;
}

inline bool is_usage_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigError:
    case ErrorCode::BadRange:
    case ErrorCode::UnknownFamily:
    case ErrorCode::EmptySupport:
    case ErrorCode::BadArguments:
      return true;
    default:
      return false;
  }
}

template <class T>
T json_get(const Json& doc, const char* key, const std::string& path) {
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw UsageError(path + ": field '" + key + "' has the wrong type");
  }
}

/// Fields of a `--config` file; every key is optional.
struct FileConfig {
  std::optional<std::string> instance, generator, algorithm, mode, arithmetic, format, out;
  std::optional<std::uint64_t> trials, seed, budget, t, workers;
};

inline FileConfig read_config_file(const std::string& path) {
  static const std::set<std::string> allowed{"instance", "generator", "algorithm", "mode",    "arithmetic", "format",
                                             "out",      "trials",    "seed",      "budget",  "t",          "workers"};
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
  if (!doc.is_object()) throw UsageError(path + ": expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) throw UsageError(path + ": unknown field '" + key + "'");
  }
  FileConfig fc;
  auto str = [&](const char* key, std::optional<std::string>& slot) {
    if (doc.contains(key)) slot = json_get<std::string>(doc, key, path);
  };
  auto num = [&](const char* key, std::optional<std::uint64_t>& slot) {
    if (!doc.contains(key)) return;
    if (!doc.at(key).is_number_unsigned()) throw UsageError(path + ": field '" + std::string(key) + "' must be a nonnegative integer");
    slot = doc.at(key).get<std::uint64_t>();
  };
  str("instance", fc.instance);
  str("generator", fc.generator);
  str("algorithm", fc.algorithm);
  str("mode", fc.mode);
  str("arithmetic", fc.arithmetic);
  str("format", fc.format);
  str("out", fc.out);
  num("trials", fc.trials);
  num("seed", fc.seed);
  num("budget", fc.budget);
  num("t", fc.t);
  num("workers", fc.workers);
  return fc;
}

inline Arithmetic arithmetic_or_throw(const std::string& s) {
  if (auto a = parse_arithmetic(s)) return *a;
  throw UsageError("arithmetic must be float or rational, got '" + s + "'");
}

inline AnyInstance load_instance_file(const std::string& path) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return load_instance(bytes);
}

template <Scalar S>
std::string show(const S& v) {
  if constexpr (is_exact_v<S>) return format_rational(v);
  else return format_double(v);
}

template <Scalar S>
Json number(const S& v) {
  if constexpr (is_exact_v<S>) return format_rational(v);
  else return v;
}

// --- solve -----------------------------------------------------------------

template <Scalar S>
int solve_with(const AnyInstance& any, const std::string& which, std::uint64_t budget, const std::string& out_path,
               std::ostream& out) {
  Json doc;
  doc["which"] = which;
  S objective = 0;
  if (const auto* k = std::get_if<KnapsackInstance>(&any)) {
    if (which == "fractional") {
      const auto sol = fractional_greedy<S>(*k);
      objective = sol.objective;
      Json fr = Json::array();
      for (const auto& f : sol.fractions) fr.push_back(number(f));
      doc["fractions"] = fr;
    } else {
      const auto sol = solve_integral_knapsack_bruteforce<S>(*k, budget);
      objective = sol.value;
      Json chosen = Json::array();
      for (std::size_t j = 0; j < sol.chosen.size(); ++j) chosen.push_back(sol.chosen[j] ? 1 : 0);
      doc["chosen"] = chosen;
    }
  } else {
    const auto& g = std::get<GapInstance>(any);
    Json rows = Json::array();
    if (which == "fractional") {
      const auto sol = solve_fractional_gap<S>(g, ItemSet::full(g.num_items()));
      objective = sol.objective;
      for (std::size_t i = 0; i < g.num_bins(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < g.num_items(); ++j) row.push_back(number(sol.primal(i, j)));
        rows.push_back(row);
      }
    } else {
      const auto sol = solve_integral_gap_bruteforce<S>(g, budget);
      objective = sol.value;
      for (std::size_t i = 0; i < g.num_bins(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < g.num_items(); ++j) row.push_back(sol.assignment(i, j));
        rows.push_back(row);
      }
    }
    doc["assignment"] = rows;
  }
  doc["objective"] = number(objective);
  out << which << " optimum: " << show(objective) << "\n";
  if (!out_path.empty()) write_output(out_path, doc.dump(2) + "\n");
  return kExitOk;
}

// --- verify ----------------------------------------------------------------

inline Json suite_json(const SuiteReport& r, const SuiteOptions& o, Arithmetic a) {
  Json j;
  j["suite"] = r.name;
  j["seed"] = o.seed;
  j["trials"] = o.trials;
  j["arithmetic"] = std::string(to_string(a));
  j["cases"] = r.cases;
  j["failures"] = r.failures;
  j["pass"] = r.passed();
  j["details"] = r.lines;
  j["counterexamples"] = r.counterexamples;
  return j;
}

// --- trace -----------------------------------------------------------------

template <Scalar S>
Json trace_with(const AnyInstance& any, const std::string& algorithm, std::uint64_t seed,
                std::optional<std::size_t> t) {
  if (algorithm == kFractionalKnapsack) {
    const auto* k = std::get_if<KnapsackInstance>(&any);
    if (!k) throw UsageError("fractional-knapsack needs a knapsack instance");
    Rng rng(derive_seed(seed, 0));
    const Permutation perm = Permutation::random(k->num_items(), rng);
    return trace_json(run_fractional_knapsack<S>(*k, perm, t), perm);
  }
  const auto alg = parse_gap_algorithm(algorithm);
  if (!alg) throw UsageError("unknown algorithm '" + algorithm + "'");
  const GapInstance g = std::holds_alternative<GapInstance>(any) ? std::get<GapInstance>(any)
                                                                  : to_gap(std::get<KnapsackInstance>(any));
  const std::size_t n = g.num_items();
  const std::size_t sample = t.value_or(default_gap_sample(n));
  if (sample > n) throw UsageError("t exceeds n");
  Rng rng(derive_seed(seed, 0));
  const Permutation perm = Permutation::random(n, rng);
  const RandomTape tape = RandomTape::sample(n - sample, rng);
  Json j = trace_json(run_gap<S>(*alg, g, perm, tape, sample), perm);
  Json draws = Json::array();
  for (double d : tape.draws) draws.push_back(d);
  j["tape"] = {{"draws", draws}, {"coin", tape.coin}};
  return j;
}

}  // namespace detail

/// Entry point of the `rogap` tool. Returns the process exit code:
/// 0 success, 1 runtime or check failure, 2 usage error.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using namespace detail;
  CLI::App app{"Random-order online generalized assignment and knapsack experiments", "rogap"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a random instance file");
  std::vector<std::string> gap_kv, knap_kv, unit_kv;
  std::string gen_spec, gen_out;
  std::uint64_t gen_seed = 0;
  auto* o_gap = gen->add_option("--gap", gap_kv, "GAP generator: n=<items> m=<bins> [v_min= v_max= s_min= s_max= c_min= c_max=]");
  auto* o_knap = gen->add_option("--knapsack", knap_kv,
                                 "Knapsack generator: family=<uncorrelated|weak|strong|subset-sum> n=<items> [range= offset= capacity=]");
  auto* o_unit = gen->add_option("--unit-iid", unit_kv, "Unit-size knapsack: n=<items> dist=<point:V|uniform:a,b|weighted:v@w,...>");
  auto* o_spec = gen->add_option("--spec", gen_spec, "Generator spec as one string, e.g. \"gap n=5 m=2\"");
  gen->add_option("--seed", gen_seed, "Generator seed (a seed= key in the spec takes precedence)");
  gen->add_option("--out", gen_out, "Output path (default: standard output)");

  // solve
  auto* solve = app.add_subcommand("solve", "Print the fractional or integral optimum of an instance");
  std::string solve_instance, solve_which = "fractional", solve_out, solve_arith = "float";
  std::uint64_t solve_budget = 0;
  solve->add_option("instance,--instance", solve_instance, "Instance file")->required();
  solve->add_option("--which", solve_which, "fractional or integral")
      ->check(CLI::IsMember({"fractional", "integral"}));
  solve->add_option("--arithmetic", solve_arith, "float or rational")->check(CLI::IsMember({"float", "rational"}));
  auto* o_solve_budget = solve->add_option("--budget", solve_budget, "Enumeration budget of the integral solver");
  solve->add_option("--out", solve_out, "Write the solution as JSON");

  // run
  auto* run = app.add_subcommand("run", "Run an experiment and write its report");
  std::string run_instance, run_generator, run_algorithm = "random-gap", run_mode = "mc", run_arith = "float",
                                           run_format = "json", run_out, run_config;
  std::uint64_t run_trials = 1000, run_seed = 0, run_budget = 0;
  std::size_t run_t = 0, run_workers = 1;
  auto* o_run_instance = run->add_option("--instance", run_instance, "Instance file");
  auto* o_run_generator = run->add_option("--generator", run_generator, "Generator spec, e.g. \"gap n=5 m=2 seed=1\"");
  auto* o_run_algorithm =
      run->add_option("--algorithm", run_algorithm,
                      "infeasible-gap, feasible-gap, imitative-gap, random-gap or fractional-knapsack");
  auto* o_run_mode = run->add_option("--mode", run_mode, "exact or mc");
  auto* o_run_trials = run->add_option("--trials", run_trials, "Monte Carlo trials");
  auto* o_run_seed = run->add_option("--seed", run_seed, "Master seed");
  auto* o_run_t = run->add_option("--t", run_t, "Sampling length override, in [1, n-1]");
  auto* o_run_arith = run->add_option("--arithmetic", run_arith, "float or rational");
  auto* o_run_format = run->add_option("--format", run_format, "json or csv");
  auto* o_run_out = run->add_option("--out", run_out, "Report path (default: standard output)");
  auto* o_run_workers = run->add_option("--workers", run_workers, "Worker threads; does not change results");
  auto* o_run_budget = run->add_option("--budget", run_budget, "Enumeration budget");
  run->add_option("--config", run_config, "JSON file with any of the flags above; flags take precedence");

  // verify
  auto* verify = app.add_subcommand("verify", "Run a property battery; exit 1 on any failure");
  std::string verify_suite, verify_arith = "rational", verify_out;
  SuiteOptions vopt;
  std::uint64_t verify_budget = 0;
  verify->add_option("suite", verify_suite, "feasibility, coupling, lemma2, lemma3, lemma4 or eq1")
      ->required()
      ->check(CLI::IsMember({"feasibility", "coupling", "lemma2", "lemma3", "lemma4", "eq1"}));
  verify->add_option("--trials", vopt.trials, "Random triples, pairs, or samples per cell");
  verify->add_option("--seed", vopt.seed, "Master seed");
  verify->add_option("--instances", vopt.instances, "Size of the exactly enumerated corpus");
  verify->add_option("--cells", vopt.cells, "Number of lemma2 cells");
  verify->add_option("--arithmetic", verify_arith, "float or rational")->check(CLI::IsMember({"float", "rational"}));
  auto* o_verify_budget = verify->add_option("--budget", verify_budget, "Enumeration budget");
  verify->add_option("--out", verify_out, "Write the suite result as JSON");

  // trace
  auto* trace = app.add_subcommand("trace", "Write the round-by-round trace of one seeded run");
  std::string trace_instance, trace_generator, trace_algorithm = "random-gap", trace_arith = "float", trace_out;
  std::uint64_t trace_seed = 0;
  std::size_t trace_t = 0;
  trace->add_option("--instance", trace_instance, "Instance file");
  trace->add_option("--generator", trace_generator, "Generator spec");
  trace->add_option("--algorithm", trace_algorithm, "Algorithm name");
  trace->add_option("--seed", trace_seed, "Seed of the order and tape (trial 0 of a run with this seed)");
  auto* o_trace_t = trace->add_option("--t", trace_t, "Sampling length override");
  trace->add_option("--arithmetic", trace_arith, "float or rational")->check(CLI::IsMember({"float", "rational"}));
  trace->add_option("--out", trace_out, "Output path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const int chosen = static_cast<int>(o_gap->count() > 0) + static_cast<int>(o_knap->count() > 0) +
                         static_cast<int>(o_unit->count() > 0) + static_cast<int>(o_spec->count() > 0);
      if (chosen != 1) throw UsageError("generate needs exactly one of --gap, --knapsack, --unit-iid, --spec");
      GeneratorSpec spec;
      try {
        if (o_spec->count()) {
          spec = parse_generator_spec(gen_spec);
        } else {
          std::vector<std::string> tokens;
          tokens.push_back(o_gap->count() ? "gap" : o_knap->count() ? "knapsack" : "unit-iid");
          const auto& kv = o_gap->count() ? gap_kv : o_knap->count() ? knap_kv : unit_kv;
          tokens.insert(tokens.end(), kv.begin(), kv.end());
          spec = parse_generator_spec(tokens);
        }
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      AnyInstance inst = [&]() -> AnyInstance {
        try {
          return generate(spec, gen_seed);
        } catch (const Error& e) {
          if (is_usage_code(e.code()) || e.code() == ErrorCode::ParseError) throw UsageError(e.what());
          throw;
        }
      }();
      const std::string bytes = save_instance(inst);
      emit(gen_out, bytes, out);
      summary_stream(gen_out, out, err) << (gen_out.empty() ? std::string("instance") : gen_out) << " digest "
                                        << digest_bytes(bytes) << "\n";
      return kExitOk;
    }

    if (solve->parsed()) {
      const std::uint64_t budget = o_solve_budget->count() ? solve_budget : default_budget();
      const AnyInstance inst = load_instance_file(solve_instance);
      return arithmetic_or_throw(solve_arith) == Arithmetic::Rational
                 ? solve_with<Rational>(inst, solve_which, budget, solve_out, out)
                 : solve_with<double>(inst, solve_which, budget, solve_out, out);
    }

    if (run->parsed()) {
      FileConfig fc;
      if (!run_config.empty()) fc = read_config_file(run_config);
      auto pick = [](CLI::Option* opt, const auto& flag, const auto& file, const auto& fallback) {
        using T = std::decay_t<decltype(fallback)>;
        if (opt->count()) return T(flag);
        if (file) return T(*file);
        return fallback;
      };
      ExperimentConfig c;
      c.instance_path = pick(o_run_instance, run_instance, fc.instance, std::string());
      c.generator = pick(o_run_generator, run_generator, fc.generator, std::string());
      if (o_run_instance->count() && !o_run_generator->count()) c.generator.clear();
      if (o_run_generator->count() && !o_run_instance->count()) c.instance_path.clear();
      c.algorithm = pick(o_run_algorithm, run_algorithm, fc.algorithm, run_algorithm);
      const std::string mode = pick(o_run_mode, run_mode, fc.mode, run_mode);
      const auto parsed_mode = parse_mode(mode);
      if (!parsed_mode) throw UsageError("mode must be exact or mc, got '" + mode + "'");
      c.mode = *parsed_mode;
      c.trials = pick(o_run_trials, run_trials, fc.trials, run_trials);
      c.seed = pick(o_run_seed, run_seed, fc.seed, run_seed);
      if (o_run_t->count()) c.t = run_t;
      else if (fc.t) c.t = static_cast<std::size_t>(*fc.t);
      c.arithmetic = arithmetic_or_throw(pick(o_run_arith, run_arith, fc.arithmetic, run_arith));
      const std::string format_text = pick(o_run_format, run_format, fc.format, run_format);
      const auto format = parse_format(format_text);
      if (!format) throw UsageError("format must be json or csv, got '" + format_text + "'");
      const std::string out_path = pick(o_run_out, run_out, fc.out, std::string());
      c.workers = static_cast<std::size_t>(pick(o_run_workers, static_cast<std::uint64_t>(run_workers), fc.workers,
                                                std::uint64_t{1}));
      c.budget = o_run_budget->count() ? run_budget : fc.budget ? *fc.budget : default_budget();
      try {
        validate_config(c);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      ExperimentReport report = [&] {
        try {
          return run_experiment(c);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::ConfigError) throw UsageError(e.what());
          throw;
        }
      }();
      emit(out_path, write_report(report, *format), out);
      const bool ok = report_passes(report);
      summary_stream(out_path, out, err) << summarize_report(report) << (ok ? "PASS" : "FAIL") << "\n";
      return ok ? kExitOk : kExitFailure;
    }

    if (verify->parsed()) {
      vopt.budget = o_verify_budget->count() ? verify_budget : default_budget();
      const Arithmetic a = arithmetic_or_throw(verify_arith);
      const SuiteReport r = run_suite(verify_suite, vopt, a);
      out << "suite " << r.name << ": " << (r.passed() ? "pass" : "FAIL") << " (" << r.cases << " cases, "
          << r.failures << " failures)\n";
      for (const auto& line : r.lines) out << "  " << line << "\n";
      for (const auto& ce : r.counterexamples) out << "  counterexample: " << ce << "\n";
      if (!verify_out.empty()) write_output(verify_out, suite_json(r, vopt, a).dump(2) + "\n");
      return r.passed() ? kExitOk : kExitFailure;
    }

    if (trace->parsed()) {
      if (trace_instance.empty() == trace_generator.empty()) {
        throw UsageError("trace needs exactly one of --instance or --generator");
      }
      AnyInstance inst = [&]() -> AnyInstance {
        if (!trace_instance.empty()) return load_instance_file(trace_instance);
        try {
          return generate(parse_generator_spec(trace_generator), trace_seed);
        } catch (const Error& e) {
          throw UsageError(e.what());
        }
      }();
      std::optional<std::size_t> t;
      if (o_trace_t->count()) t = trace_t;
      const Json j = arithmetic_or_throw(trace_arith) == Arithmetic::Rational
                         ? trace_with<Rational>(inst, trace_algorithm, trace_seed, t)
                         : trace_with<double>(inst, trace_algorithm, trace_seed, t);
      emit(trace_out, j.dump(2) + "\n", out);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace rogap::cli
