// Generates a small GAP instance, runs the four online algorithms on one
// random order, and prints their values next to the offline optima.
#include <iostream>

#include "rogap/rogap.hpp"

int main() {
  using namespace rogap;
  const GapInstance inst = gen_uniform_gap(8, 2, /*seed=*/42);

  Rng rng(derive_seed(/*master=*/7, /*index=*/0));
  const Permutation perm = Permutation::random(inst.num_items(), rng);
  const std::size_t t = default_gap_sample(inst.num_items());
  const RandomTape tape = RandomTape::sample(inst.num_items() - t, rng);

  FractionalGapCache<Rational> cache(inst);
  for (auto alg : {GapAlgorithm::Infeasible, GapAlgorithm::Feasible, GapAlgorithm::Imitative, GapAlgorithm::Random}) {
    const auto run = run_gap<Rational>(alg, inst, perm, tape, t, &cache);
    std::cout << to_string(alg) << ": " << format_rational(run.value) << "\n";
  }

  const auto lp = solve_fractional_gap<Rational>(inst, ItemSet::full(inst.num_items()));
  const auto opt = solve_integral_gap_bruteforce<Rational>(inst);
  std::cout << "fractional optimum: " << format_rational(lp.objective) << "\n";
  std::cout << "integral optimum: " << format_rational(opt.value) << "\n";

  const auto exact = exact_expectation_gap<Rational>(gen_uniform_gap(5, 2, 42));
  std::cout << "exact E[random-gap] on a 5-item instance: " << format_rational(exact.random) << "\n";
}
