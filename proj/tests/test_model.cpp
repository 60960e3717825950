#include <gtest/gtest.h>

#include <string>

#include "rogap/generator_spec.hpp"
#include "rogap/generators.hpp"
#include "rogap/instance_io.hpp"
#include "rogap/model.hpp"

using namespace rogap;

namespace {

GapCandidate single(Rational cap, Rational v, Rational s) {
  GapCandidate c;
  c.capacities = {cap};
  c.values = {{v}};
  c.sizes = {{s}};
  return c;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvariantViolation;
}

GapInstance two_by_two() {
  GapCandidate c;
  c.capacities = {10, 8};
  c.values = {{7, 2}, {1, 8}};
  c.sizes = {{3, 4}, {5, 2}};
  return validate_gap(c);
}

}  // namespace

TEST(Validation, AcceptsSizeEqualToCapacity) {
  const auto inst = validate_gap(single(1, 1, 1));
  EXPECT_EQ(inst.num_items(), 1u);
  EXPECT_EQ(inst.num_bins(), 1u);
}

TEST(Validation, RejectsOversizedItemWithIndices) {
  try {
    validate_gap(single(1, 1, Rational(3, 2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SizeExceedsCapacity);
    EXPECT_EQ(e.bin(), 0u);
    EXPECT_EQ(e.item(), 0u);
  }
}

TEST(Validation, RejectsZeroSizeAndNamesIt) {
  GapCandidate c;
  c.capacities = {5, 5};
  c.values = {{1, 1}, {1, 1}};
  c.sizes = {{1, 1}, {0, 1}};
  try {
    validate_gap(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveSize);
    EXPECT_EQ(e.bin(), 1u);
    EXPECT_EQ(e.item(), 0u);
    EXPECT_NE(std::string(e.what()).find("(2,1)"), std::string::npos) << e.what();
  }
}

TEST(Validation, OtherViolations) {
  EXPECT_EQ(code_of([] { validate_gap(single(0, 1, 1)); }), ErrorCode::NonPositiveCapacity);
  EXPECT_EQ(code_of([] { validate_gap(single(2, -1, 1)); }), ErrorCode::NegativeValue);
  GapCandidate bad;
  bad.capacities = {1, 1};
  bad.values = {{1}};
  bad.sizes = {{1}};
  EXPECT_EQ(code_of([&] { validate_gap(bad); }), ErrorCode::DimensionMismatch);
  GapCandidate empty;
  empty.capacities = {1};
  empty.values = {{}};
  empty.sizes = {{}};
  EXPECT_EQ(code_of([&] { validate_gap(empty); }), ErrorCode::EmptyInstance);
  EXPECT_NO_THROW(validate_gap(single(2, 0, 1)));  // zero values allowed

  KnapsackCandidate k{Rational(5), {Rational(1)}, {Rational(6)}};
  EXPECT_EQ(code_of([&] { validate_knapsack(k); }), ErrorCode::SizeExceedsCapacity);
  KnapsackCandidate kz{Rational(5), {Rational(0)}, {Rational(1)}};
  EXPECT_EQ(code_of([&] { validate_knapsack(kz); }), ErrorCode::NonPositiveValue);
}

TEST(Assignment, ValueOfAndLoads) {
  const auto inst = two_by_two();
  Assignment x = empty_assignment(inst);
  EXPECT_EQ(value_of<Rational>(x, inst), 0);
  EXPECT_EQ(bin_load<Rational>(x, inst, 0), 0);
  x(0, 0) = 1;
  EXPECT_EQ(value_of<Rational>(x, inst), 7);
  EXPECT_EQ(bin_load<Rational>(x, inst, 0), 3);
  x(0, 1) = 1;
  EXPECT_EQ(bin_load<Rational>(x, inst, 0), 7);

  FractionalAssignment<Rational> f(2, 2, Rational(0));
  f(0, 0) = Rational(1, 2);
  GapCandidate c = single(10, 8, 1);
  const auto one = validate_gap(c);
  FractionalAssignment<Rational> g(1, 1, Rational(1, 2));
  EXPECT_EQ(value_of<Rational>(g, one), 4);
  EXPECT_DOUBLE_EQ(value_of<double>(g, one), 4.0);

  EXPECT_THROW(bin_load<Rational>(x, inst, 2), Error);
  Assignment wrong(1, 2, 0);
  EXPECT_EQ(code_of([&] { value_of<Rational>(wrong, inst); }), ErrorCode::DimensionMismatch);
}

TEST(Assignment, FeasibilityReportFlagsExactlyTheViolations) {
  const auto inst = two_by_two();
  Assignment x = empty_assignment(inst);
  x(0, 0) = 1;
  x(1, 1) = 1;
  auto rep = check_feasibility<Rational>(x, inst);
  EXPECT_TRUE(rep.feasible());
  EXPECT_TRUE(rep.bins[0].overflow_items.empty());
  EXPECT_EQ(rep.bins[0].slack, 7);

  x(0, 1) = 1;  // column 2 sums to 2
  rep = check_feasibility<Rational>(x, inst);
  EXPECT_FALSE(rep.satisfies_c2[1]);
  EXPECT_TRUE(rep.satisfies_c2[0]);
  EXPECT_TRUE(rep.c1());

  GapCandidate c;
  c.capacities = {5};
  c.values = {{1, 1}};
  c.sizes = {{4, 3}};
  const auto tight = validate_gap(c);
  Assignment y(1, 2, 1);
  const auto over = check_feasibility<Rational>(y, tight);
  EXPECT_FALSE(over.bins[0].satisfies_c1);
  EXPECT_EQ(over.bins[0].slack, -2);
  ASSERT_EQ(over.bins[0].overflow_items.size(), 1u);
  EXPECT_EQ(over.bins[0].overflow_items[0], 1u);
  // Consistency with bin_load.
  EXPECT_EQ(over.bins[0].slack, tight.capacity<Rational>(0) - bin_load<Rational>(y, tight, 0));
}

TEST(Permutation, ValidatesBijection) {
  EXPECT_NO_THROW(Permutation({2, 0, 1}));
  EXPECT_THROW(Permutation({0, 0, 1}), Error);
  EXPECT_THROW(Permutation({0, 3, 1}), Error);
  Rng rng(5);
  const auto p = Permutation::random(10, rng);
  std::vector<std::size_t> sorted(p.order().begin(), p.order().end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < 10; ++k) EXPECT_EQ(sorted[k], k);
  EXPECT_EQ(Permutation::identity(3).order(), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Generators, UniformGapIsDeterministicAndSeedSensitive) {
  const auto a = gen_uniform_gap(5, 2, 1);
  const auto b = gen_uniform_gap(5, 2, 1);
  const auto c = gen_uniform_gap(5, 2, 2);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
  EXPECT_EQ(code_of([] { gen_uniform_gap(0, 2, 1); }), ErrorCode::BadRange);
  GapRanges r;
  r.s_max = 200;
  EXPECT_EQ(code_of([&] { gen_uniform_gap(3, 2, 1, r); }), ErrorCode::BadRange);
}

TEST(Generators, KnapsackFamilies) {
  const auto ss = gen_knapsack_family(KnapsackFamily::SubsetSum, 20, 3);
  for (std::size_t j = 0; j < 20; ++j) EXPECT_EQ(ss.values()[j], ss.sizes()[j]);
  KnapsackParams p;
  p.offset = 10;
  const auto sc = gen_knapsack_family(KnapsackFamily::StronglyCorrelated, 20, 3, p);
  for (std::size_t j = 0; j < 20; ++j) EXPECT_EQ(sc.values()[j], sc.sizes()[j] + 10);
  EXPECT_TRUE(gen_knapsack_family(KnapsackFamily::Uncorrelated, 8, 9) ==
              gen_knapsack_family(KnapsackFamily::Uncorrelated, 8, 9));
  EXPECT_EQ(code_of([] { parse_knapsack_family("heavy"); }), ErrorCode::UnknownFamily);
  EXPECT_EQ(parse_knapsack_family("weak"), KnapsackFamily::WeaklyCorrelated);
}

TEST(Generators, UnitIid) {
  const auto k = gen_unit_iid(10, parse_distribution("point:5"), 3);
  EXPECT_EQ(k.capacity_exact(), 1);
  for (std::size_t j = 0; j < 10; ++j) {
    EXPECT_EQ(k.sizes()[j], 1);
    EXPECT_EQ(k.values()[j], 5);
  }
  const auto u1 = gen_unit_iid(30, parse_distribution("uniform:1,4"), 8);
  const auto u2 = gen_unit_iid(30, parse_distribution("uniform:1,4"), 8);
  EXPECT_TRUE(u1 == u2);
  const auto w = gen_unit_iid(50, parse_distribution("weighted:2@1,7@3"), 1);
  for (const auto& v : w.values()) EXPECT_TRUE(v == 2 || v == 7);
  EXPECT_EQ(code_of([] { gen_unit_iid(3, parse_distribution("uniform:"), 1); }), ErrorCode::EmptySupport);
}

TEST(GeneratorSpec, ParsesFlatKeyValueStrings) {
  const auto g = parse_generator_spec("gap n=5 m=2 seed=1");
  EXPECT_EQ(g.kind, "gap");
  EXPECT_TRUE(std::get<GapInstance>(generate(g, 99)) == gen_uniform_gap(5, 2, 1));
  EXPECT_TRUE(std::get<GapInstance>(generate(parse_generator_spec("gap n=5 m=2"), 1)) == gen_uniform_gap(5, 2, 1));
  EXPECT_EQ(to_string(parse_generator_spec("knapsack n=4 family=weak")), "knapsack family=weak n=4");
  EXPECT_EQ(code_of([] { parse_generator_spec("bogus n=1"); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { parse_generator_spec("gap n=1 q=2"); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { generate(parse_generator_spec("gap n=x m=1"), 0); }), ErrorCode::ConfigError);
}

TEST(InstanceIo, RoundTripIsExact) {
  const auto g = gen_uniform_gap(6, 3, 11);
  EXPECT_TRUE(std::get<GapInstance>(load_instance(save_instance(g))) == g);
  GapCandidate c;
  c.capacities = {Rational(7, 3)};
  c.values = {{Rational(1, 7), Rational(0)}};
  c.sizes = {{Rational(1, 3), Rational(2)}};
  const auto q = validate_gap(c);
  const std::string bytes = save_instance(q);
  EXPECT_NE(bytes.find("\"7/3\""), std::string::npos);
  EXPECT_TRUE(std::get<GapInstance>(load_instance(bytes)) == q);
  const auto k = gen_knapsack_family(KnapsackFamily::WeaklyCorrelated, 7, 2);
  EXPECT_TRUE(std::get<KnapsackInstance>(load_instance(save_instance(k))) == k);
  EXPECT_EQ(save_instance(load_instance(bytes)), bytes);
}

TEST(InstanceIo, AcceptsDecimalStringsAndFloats) {
  const auto any = load_instance(R"({"kind":"knapsack","capacity":"2.5","values":[0.5,"3/4"],"sizes":[1,"1e0"]})");
  const auto& k = std::get<KnapsackInstance>(any);
  EXPECT_EQ(k.capacity_exact(), Rational(5, 2));
  EXPECT_EQ(k.values()[0], Rational(1, 2));
  EXPECT_EQ(k.values()[1], Rational(3, 4));
  EXPECT_EQ(k.sizes()[1], 1);
}

TEST(InstanceIo, RejectsMalformedInput) {
  const std::string good = save_instance(gen_uniform_gap(3, 1, 1));
  EXPECT_EQ(code_of([&] { load_instance(good.substr(0, good.size() / 2)); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { load_instance(R"({"kind":"gap","capacities":[1],"values":[[1]],"sizes":[[2]]})"); }),
            ErrorCode::SizeExceedsCapacity);
  EXPECT_EQ(code_of([] {
              load_instance(R"({"kind":"gap","capacities":[1],"values":[[1]],"sizes":[[1]],"extra":1})");
            }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { load_instance(R"({"kind":"gap","capacities":[1],"values":[[1]]})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { load_instance(R"({"kind":"disk"})"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { load_instance(R"({"kind":"knapsack","capacity":"1/0","values":[1],"sizes":[1]})"); }),
            ErrorCode::ParseError);
}
