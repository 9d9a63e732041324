#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>

#include "qslab/carleson.hpp"

using namespace qslab;

namespace {

Params reference() {
  Params p;
  p.s = {1, 1};
  p.alpha = Rational(1, 2);
  p.depth = 2;
  p.exponents = canonical_exponents(p.s.m, p.depth);
  return p;
}

const Ladder kHand{{0, 1}};
const uint64_t kBudget = 2000000;

IndexSet hand_set() { return IndexSet::custom({1}, Rational(1, 2)); }

}  // namespace

TEST_CASE("ladder from params") {
  Params p = reference();
  Ladder l = Ladder::from_params(p);
  CHECK(l.levels == std::vector<uint32_t>{0, 4, 8});
  CHECK(l.gens() == 2);
  CHECK(l.leaf_level() == 8);
}

TEST_CASE("relative mass jumps of the three-cell measure") {
  IndexSet J = hand_set();
  CHECK(carleson_coefficient(parse_address("0"), J) == 3);
  CHECK(carleson_coefficient(parse_address("1"), J) == Rational(-3, 4));
  CHECK(carleson_coefficient(parse_address("2"), J) == 0);  // wraps to cell 0
  CHECK(carleson_coefficient(parse_address(""), J) == 0);   // root vs itself
}

TEST_CASE("hand series is bit exact") {
  IndexSet J = hand_set();
  CarlesonSeries s(kHand, J, Rational(3), kBudget);
  REQUIRE(s.leaves() == 3);
  CHECK(s.leaf_mass(0) == Rational(1, 6));
  CHECK(s.leaf_mass(1) == Rational(2, 3));
  CHECK(s.leaf_mass(2) == Rational(1, 6));
  // finest slice carries the leaf coefficients, the root slice vanishes
  CHECK(s.value(1, 0) == 3);
  CHECK(s.value(1, 1) == Rational(-3, 4));
  CHECK(s.value(1, 2) == 0);
  CHECK(s.value(0, 0) == 0);
  CHECK(s.value(0, 1) == 0);
  CHECK(s.value(0, 2) == 0);

  SeriesCheck v = s.verify(J);
  CHECK(v.mean_ok);
  CHECK(v.sign_ok);
  CHECK(v.budget_ok);
  CHECK(v.budget_tight == 1);  // |Delta_1| = 3 = C on the first leaf

  CHECK(s.integral(1, Rational(1, 3)) == Rational(1, 2));
  CHECK(s.integral(1, Rational(2, 3)) == 0);  // 1/2 - (3/4)(2/3)
  CHECK(s.integral(1, Rational(1)) == 0);     // zero-mean over the period
  CHECK(s.integral(0, Rational(2, 3)) == 0);
  CHECK(s.abs_integral(1, Rational(2, 3)) == 1);
  CHECK(s.abs_integral(1, Rational(4, 3)) == 1 + Rational(1, 2));  // wraps
}

TEST_CASE("subtree sums of the hand measure") {
  IndexSet J = hand_set();
  CHECK(carleson_sum(parse_address(""), kHand, J, kBudget) == 1);
  CHECK(carleson_sum(parse_address("1"), kHand, J, kBudget) == Rational(1, 2));
  CHECK(carleson_sum(parse_address("0"), kHand, J, kBudget) == Rational(1, 2));
  CHECK_THROWS_AS(carleson_sum(parse_address("00"), kHand, J, kBudget), DomainError);
}

TEST_CASE("packing ratios stay under the analytic constant") {
  Params p = reference();
  Derived d = derive(p);
  IndexSet J = IndexSet::derived_mode(p, d);
  Ladder l = Ladder::from_params(p);
  G2Report rep = verify_g2(l, J, d, kBudget, 500, 1);
  CHECK(rep.exhaustive_pass);
  CHECK(rep.chain_pass);
  CHECK(rep.max_ratio == Rational(181, 54));  // frozen exhaustive maximum
  CHECK(rep.analytic_bound == 15);
  CHECK(rep.max_ratio <= rep.analytic_bound);
  CHECK(rep.root_ratio <= rep.max_ratio);
  CHECK(rep.chain_count == 500);
  // the chain estimator is unbiased for the root ratio; with 500 seeded
  // chains it should land well within a factor of two
  double root = to_double(rep.root_ratio);
  CHECK(rep.chain_mean >= 0.5 * root);
  CHECK(rep.chain_mean <= 2.0 * root);
  CHECK(rep.chain_max >= rep.chain_mean);
}

TEST_CASE("series on the reference ladder verifies") {
  Params p = reference();
  Derived d = derive(p);
  IndexSet J = IndexSet::derived_mode(p, d);
  Ladder l = Ladder::from_params(p);
  CarlesonSeries s(l, J, d.c_inf, kBudget);
  CHECK(s.leaves() == 6561);
  SeriesCheck v = s.verify(J);
  CHECK(v.mean_ok);
  CHECK(v.sign_ok);
  CHECK(v.budget_ok);

  // dual route for one cell mean: integral over [left, right) of the cell
  TernaryAddress cell = parse_address("0210");
  Rational mean = s.integral(1, cell.right()) - s.integral(1, cell.left());
  Rational a = carleson_coefficient(cell, J);
  CHECK(mean == a * mass_value(mu_cell(cell, J), J.alpha()));
}

TEST_CASE("series budget saturation is a hard error") {
  // C = 1/2 cannot absorb leaf coefficients of size 3
  IndexSet J = hand_set();
  CHECK_THROWS_AS(CarlesonSeries(kHand, J, Rational(1, 2), kBudget), CheckError);
}

TEST_CASE("leaf budget guard") {
  Params p = reference();
  Derived d = derive(p);
  IndexSet J = IndexSet::derived_mode(p, d);
  Ladder l = Ladder::from_params(p);
  CHECK_THROWS_AS(CarlesonSeries(l, J, d.c_inf, 100), BudgetError);
}

TEST_CASE("cache round trip and mismatch rejection") {
  IndexSet J = hand_set();
  CarlesonSeries s(kHand, J, Rational(3), kBudget);
  std::string path = "test_series.cache";
  uint64_t hash = 0xabcdef0123456789ull;
  s.save(path, hash);

  auto loaded = CarlesonSeries::try_load(path, hash, kHand, Rational(3), J, kBudget);
  REQUIRE(loaded.has_value());
  CHECK(loaded->leaves() == 3);
  CHECK(loaded->value(1, 0) == 3);
  CHECK(loaded->integral(1, Rational(1, 3)) == Rational(1, 2));

  CHECK_FALSE(CarlesonSeries::try_load(path, hash + 1, kHand, Rational(3), J, kBudget));
  CHECK_FALSE(CarlesonSeries::try_load(path, hash, kHand, Rational(4), J, kBudget));
  CHECK_FALSE(CarlesonSeries::try_load(path, hash, Ladder{{0, 2}}, Rational(3), J, kBudget));
  CHECK_FALSE(CarlesonSeries::try_load("no_such_file.cache", hash, kHand, Rational(3), J,
                                       kBudget));
  std::remove(path.c_str());
}
