#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rogap/checks.hpp"
#include "rogap/cli.hpp"
#include "rogap/exact.hpp"
#include "rogap/experiment.hpp"
#include "rogap/monte_carlo.hpp"
#include "rogap/suites.hpp"

using namespace rogap;

namespace {

GapInstance two_items() {
  GapCandidate c;
  c.capacities = {1};
  c.values = {{9, 5}};
  c.sizes = {{1, 1}};
  return validate_gap(c);
}

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rogap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = rogap::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "rogap_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

double number_after_colon(const std::string& line) {
  return std::stod(line.substr(line.find(':') + 1));
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact enumeration

TEST(Exact, ZeroValuesGiveZero) {
  GapCandidate c;
  c.capacities = {2, 3};
  c.values = {{0, 0, 0, 0}, {0, 0, 0, 0}};
  c.sizes = {{1, 2, 1, 1}, {1, 1, 2, 3}};
  const auto g = validate_gap(c);
  const auto ex = exact_expectation_gap<Rational>(g);
  EXPECT_EQ(ex.infeasible, 0);
  EXPECT_EQ(ex.random, 0);
  EXPECT_EQ(ex.permutations, 24u);
}

TEST(Exact, RandomIsHalfOfFeasiblePlusImitativeAndDominatesHalfInfeasible) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = corpus_gap(seed, 2, 5, 1, 2).inst;
    const auto ex = exact_expectation_gap<Rational>(g);
    EXPECT_EQ(ex.random * 2, ex.feasible + ex.imitative);
    EXPECT_GE(ex.random * 2, ex.infeasible);
    EXPECT_EQ(ex.coupling_violations, 0u);
  }
}

TEST(Exact, BudgetExceeded) {
  const auto g = gen_uniform_gap(9, 3, 1);
  try {
    exact_expectation_gap<Rational>(g, std::nullopt, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
  }
  EXPECT_FALSE(gap_enumeration_size(9, 3, 4, 1000).has_value());
  EXPECT_DOUBLE_EQ(*gap_enumeration_size(3, 1, 1, 1000), 6.0 * 4.0);
}

TEST(Exact, AgreesWithMonteCarlo) {
  const auto g = gen_uniform_gap(5, 2, 17);
  const auto ex = exact_expectation_gap<double>(g);
  McOptions o;
  o.trials = 40000;
  o.master_seed = 3;
  for (auto alg : {GapAlgorithm::Infeasible, GapAlgorithm::Random}) {
    const auto mc = mc_estimate_gap<double>(g, alg, o);
    ASSERT_TRUE(mc.value.stderr_);
    EXPECT_NEAR(mc.value.mean, ex.expectation(alg), 4 * *mc.value.stderr_) << to_string(alg);
  }
}

// ---------------------------------------------------------------------------
// Monte Carlo

TEST(MonteCarlo, DeterministicAndWorkerIndependent) {
  const auto g = gen_uniform_gap(8, 2, 5);
  McOptions o;
  o.trials = 300;
  o.master_seed = 11;
  const auto a = mc_estimate_gap<double>(g, GapAlgorithm::Random, o);
  o.workers = 3;
  const auto b = mc_estimate_gap<double>(g, GapAlgorithm::Random, o);
  ASSERT_EQ(a.trials.size(), b.trials.size());
  for (std::size_t k = 0; k < a.trials.size(); ++k) {
    EXPECT_EQ(a.trials[k].perm_digest, b.trials[k].perm_digest);
    EXPECT_EQ(a.trials[k].value, b.trials[k].value);
    EXPECT_EQ(a.trials[k].seed, derive_seed(11, k));
  }
  EXPECT_EQ(a.value.mean, b.value.mean);
  o.master_seed = 12;
  EXPECT_NE(mc_estimate_gap<double>(g, GapAlgorithm::Random, o).trials[0].perm_digest, a.trials[0].perm_digest);
}

TEST(MonteCarlo, SingleTrialHasNoStandardError) {
  McOptions o;
  o.trials = 1;
  const auto r = mc_estimate_gap<Rational>(two_items(), GapAlgorithm::Infeasible, o);
  EXPECT_EQ(r.value.count, 1u);
  EXPECT_FALSE(r.value.stderr_);
  o.trials = 0;
  EXPECT_THROW(mc_estimate_gap<Rational>(two_items(), GapAlgorithm::Infeasible, o), Error);
}

TEST(MonteCarlo, TwoItemMean) {
  McOptions o;
  o.trials = 20000;
  o.master_seed = 99;
  const auto r = mc_estimate_gap<double>(two_items(), GapAlgorithm::Infeasible, o);
  EXPECT_NEAR(r.value.mean, 4.5, 4 * *r.value.stderr_);
  EXPECT_EQ(r.opt, 9.0);
  EXPECT_EQ(r.opt_source, "bruteforce");
}

TEST(MonteCarlo, LargeInstanceUsesConservativeOpt) {
  const auto g = gen_uniform_gap(30, 4, 2);
  McOptions o;
  o.trials = 5;
  const auto r = mc_estimate_gap<double>(g, GapAlgorithm::Random, o, 1000);
  EXPECT_TRUE(r.opt_conservative);
  EXPECT_EQ(r.opt_source, "lp-bound");
}

// ---------------------------------------------------------------------------
// Checkers

TEST(Checks, CouplingCheckRejectsFeasibleOutputAsInfeasible) {
  // With y in place of x no bin ever overflows, so any item z holds breaks
  // the structure. Search for a case where z is nonempty.
  bool found = false;
  for (std::uint64_t seed = 0; seed < 500 && !found; ++seed) {
    const auto g = corpus_gap(seed, 4, 8, 1, 2).inst;
    Rng rng(seed);
    const auto perm = Permutation::random(g.num_items(), rng);
    const auto tape = RandomTape::sample(g.num_items() - default_gap_sample(g.num_items()), rng);
    const auto x = run_gap<Rational>(GapAlgorithm::Infeasible, g, perm, tape);
    const auto y = run_gap<Rational>(GapAlgorithm::Feasible, g, perm, tape);
    const auto z = run_gap<Rational>(GapAlgorithm::Imitative, g, perm, tape);
    if (z.value == 0) continue;
    found = true;
    EXPECT_TRUE(check_coupling<Rational>(g, perm, x.assignment, y.assignment, z.assignment).ok);
    const auto bad = check_coupling<Rational>(g, perm, y.assignment, y.assignment, z.assignment);
    EXPECT_FALSE(bad.ok);
    EXPECT_FALSE(bad.detail.empty());
  }
  EXPECT_TRUE(found);
}

TEST(Checks, FeasibilityCheckRejectsOverfullBin) {
  GapCandidate c;
  c.capacities = {3};
  c.values = {{1, 1}};
  c.sizes = {{2, 2}};
  const auto g = validate_gap(c);
  Assignment both(1, 2, 1);
  EXPECT_FALSE(check_feasible_output<Rational>(g, both).ok);
  Assignment one(1, 2, 0);
  one(0, 0) = 1;
  EXPECT_TRUE(check_feasible_output<Rational>(g, one).ok);
  EXPECT_TRUE(check_infeasible_output<Rational>(g, Permutation({0, 1}), both).ok);
  // Overflow attributed to the item that arrived last.
  EXPECT_TRUE(check_infeasible_output<Rational>(g, Permutation({1, 0}), both).ok);
}

TEST(Checks, OverflowFrequencyEdgeRounds) {
  const auto g = gen_uniform_gap(8, 2, 3);
  const std::size_t t = 4;
  const auto first = verify_lemma2<Rational>(g, t + 1, 0, 500, 1);
  EXPECT_EQ(first.bound, 0.0);
  EXPECT_EQ(first.overflows, 0u);
  EXPECT_TRUE(first.pass);
  const auto second = verify_lemma2<Rational>(g, t + 2, 1, 500, 1);
  EXPECT_DOUBLE_EQ(second.bound, 1.0 / static_cast<double>(t + 1));
  EXPECT_EQ(second.overflows, 0u);  // one tentative item always fits
  EXPECT_THROW(verify_lemma2<Rational>(g, t, 0, 10, 1), Error);
  EXPECT_THROW(verify_lemma2<Rational>(g, 9, 0, 10, 1), Error);
}

// ---------------------------------------------------------------------------
// Suites

TEST(Suites, AllPassAtSmallScale) {
  SuiteOptions o;
  o.trials = 200;
  o.seed = 5;
  o.instances = 5;
  o.cells = 3;
  for (auto name : kSuiteNames) {
    const auto r = run_suite(name, o, Arithmetic::Rational);
    EXPECT_TRUE(r.passed()) << name << ": " << (r.counterexamples.empty() ? "" : r.counterexamples.front());
    EXPECT_EQ(r.name, name);
  }
  EXPECT_THROW(run_suite("lemma9", o, Arithmetic::Rational), Error);
}

// ---------------------------------------------------------------------------
// Experiments

TEST(Experiment, ReportsAreByteIdenticalAcrossWorkers) {
  ExperimentConfig c;
  c.generator = "gap n=7 m=2 seed=4";
  c.trials = 200;
  c.seed = 21;
  c.workers = 1;
  const auto a = write_report(run_experiment(c), ReportFormat::Json);
  c.workers = 3;
  const auto b = write_report(run_experiment(c), ReportFormat::Json);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.find("workers"), std::string::npos);
  const auto doc = nlohmann::json::parse(a);
  for (const char* key : {"config", "instance", "opt", "mc", "bounds", "lemma_checks"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
}

TEST(Experiment, CsvSchema) {
  ExperimentConfig c;
  c.generator = "knapsack family=strong n=6 seed=2";
  c.algorithm = std::string(kFractionalKnapsack);
  c.trials = 10;
  const auto csv = write_report(run_experiment(c), ReportFormat::Csv);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "trial,seed,perm_digest,value,opt,ratio");
  std::size_t rows = 0;
  while (std::getline(in, line) && line.rfind('#', 0) != 0) ++rows;
  EXPECT_EQ(rows, 10u);
}

TEST(Experiment, ExactModeMatchesHandValue) {
  ExperimentConfig c;
  const auto path = scratch("two.json");
  std::ofstream(path) << save_instance(two_items());
  c.instance_path = path.string();
  c.algorithm = "infeasible-gap";
  c.mode = Mode::Exact;
  c.arithmetic = Arithmetic::Rational;
  const auto r = run_experiment(c);
  ASSERT_TRUE(r.exact);
  EXPECT_EQ(r.exact->expected_value_exact.value_or(""), "9/2");
  EXPECT_EQ(r.opt, 9.0);
  EXPECT_TRUE(report_passes(r));
}

TEST(Experiment, ConfigErrors) {
  ExperimentConfig c;
  EXPECT_THROW(validate_config(c), Error);  // no instance source
  c.generator = "gap n=4 m=1";
  c.t = 4;
  EXPECT_THROW(run_experiment(c), Error);
  c.t.reset();
  c.algorithm = "bogus";
  EXPECT_THROW(run_experiment(c), Error);
}

// ---------------------------------------------------------------------------
// Command line

TEST(Cli, GenerateIsReproducible) {
  const auto a = run_cli({"generate", "--gap", "n=5", "m=2", "--seed", "1"});
  const auto b = run_cli({"generate", "--gap", "n=5", "m=2", "--seed", "1"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
  EXPECT_NE(a.err.find("digest"), std::string::npos);
  const auto u = run_cli({"generate", "--unit-iid", "n=4", "dist=point:5"});
  EXPECT_EQ(u.code, 0);
  const auto k = std::get<KnapsackInstance>(load_instance(u.out));
  EXPECT_EQ(k.capacity_exact(), 1);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run_cli({"generate", "--triangle", "n=5"}).code, 2);
  EXPECT_EQ(run_cli({"generate", "--spec", "lattice n=5"}).code, 2);
  EXPECT_EQ(run_cli({"generate"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "lemma7"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
}

TEST(Cli, SolveAndBudget) {
  const auto path = scratch("g.json");
  ASSERT_EQ(run_cli({"generate", "--gap", "n=6", "m=2", "--seed", "3", "--out", path.string()}).code, 0);
  const auto frac = run_cli({"solve", path.string(), "--which", "fractional", "--arithmetic", "rational"});
  const auto integ = run_cli({"solve", path.string(), "--which", "integral"});
  ASSERT_EQ(frac.code, 0) << frac.err;
  ASSERT_EQ(integ.code, 0) << integ.err;
  EXPECT_EQ(frac.out.rfind("fractional optimum:", 0), 0u) << frac.out;
  EXPECT_GE(number_after_colon(frac.out) + 1e-9, number_after_colon(integ.out));
  const auto over = run_cli({"solve", path.string(), "--which", "integral", "--budget", "10"});
  EXPECT_EQ(over.code, 1);
  EXPECT_NE(over.err.find("BudgetExceeded"), std::string::npos) << over.err;
  EXPECT_EQ(run_cli({"solve", scratch("missing.json").string()}).code, 2);  // bad path is a usage error
}

TEST(Cli, RunIsRepeatableAndVerifyPasses) {
  const std::vector<std::string> args{"run", "--generator", "gap n=6 m=2 seed=9", "--trials", "100", "--seed", "4"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto with_workers = args;
  with_workers.insert(with_workers.end(), {"--workers", "2"});
  EXPECT_EQ(run_cli(with_workers).out, a.out);
  const auto v = run_cli({"verify", "coupling", "--trials", "100", "--instances", "3"});
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_NE(v.out.find("pass"), std::string::npos);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto cfg = scratch("cfg.json");
  std::ofstream(cfg) << R"({"generator":"gap n=5 m=1 seed=2","mode":"exact","arithmetic":"rational"})";
  const auto r = run_cli({"run", "--config", cfg.string(), "--algorithm", "infeasible-gap"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["config"]["algorithm"], "infeasible-gap");
  EXPECT_EQ(doc["config"]["mode"], "exact");
}

TEST(Cli, TraceIsOneBased) {
  const auto r = run_cli({"trace", "--generator", "gap n=4 m=2 seed=1", "--algorithm", "imitative-gap", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  for (const auto& item : doc["order"]) {
    EXPECT_GE(item.get<int>(), 1);
    EXPECT_LE(item.get<int>(), 4);
  }
  EXPECT_EQ(doc["rounds"].size(), 2u);
}
