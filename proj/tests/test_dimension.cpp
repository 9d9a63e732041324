#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qslab/dimension.hpp"

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

Params pipeline_params() {
  Pipeline pip = derive_pipeline(2, {1, 1}, Rational(1, 2));
  Params p;
  p.s = {1, 1};
  p.alpha = pip.alpha;
  p.depth = 3;
  p.exponents = canonical_exponents(p.s.m, p.depth);
  p.cover_M = pip.M;
  return p;
}

const BigInt kWalkBudget(10000000);

void check_same(const DensityDistribution& a, const DensityDistribution& b) {
  REQUIRE(a.buckets.size() == b.buckets.size());
  CHECK(a.level == b.level);
  CHECK(a.member_count == b.member_count);
  for (size_t k = 0; k < a.buckets.size(); ++k) {
    CHECK(a.buckets[k].k == b.buckets[k].k);
    CHECK(a.buckets[k].count == b.buckets[k].count);
    CHECK(a.buckets[k].lebesgue == b.buckets[k].lebesgue);
    CHECK(a.buckets[k].theta.count == b.buckets[k].theta.count);
    CHECK(a.buckets[k].theta.ones == b.buckets[k].theta.ones);
  }
}

}  // namespace

TEST_CASE("digit statistic distribution, single member") {
  IndexSet J = IndexSet::custom({1}, Rational(1, 2));
  DensityDistribution d = density_distribution(2, J);
  CHECK(d.level == 2);
  CHECK(d.member_count == 1);
  REQUIRE(d.buckets.size() == 2);
  CHECK(d.buckets[0].count == 3);  // member digit equals 1
  CHECK(d.buckets[1].count == 6);
  CHECK(d.buckets[0].lebesgue == Rational(1, 3));
  CHECK(d.buckets[1].lebesgue == Rational(2, 3));
  // bucket k carries density weight (1-a)^k (1+2a)^(members-k)
  CHECK(theta_value(d.buckets[0].theta, J.alpha()) == 2);
  CHECK(theta_value(d.buckets[1].theta, J.alpha()) == Rational(1, 2));
  check_same(d, density_distribution_exhaustive(2, J, kWalkBudget));
}

TEST_CASE("closed form matches the cell walk on the reference set") {
  Params p = reference();
  Derived d = derive(p);
  IndexSet J = IndexSet::derived_mode(p, d);
  REQUIRE(J.members() == std::vector<uint32_t>{4, 7});
  DensityDistribution c = density_distribution(8, J);
  REQUIRE(c.buckets.size() == 3);
  CHECK(c.buckets[0].count == 729);
  CHECK(c.buckets[1].count == 2916);
  CHECK(c.buckets[2].count == 2916);
  check_same(c, density_distribution_exhaustive(8, J, kWalkBudget));
  // below the first member the statistic is constant
  DensityDistribution flat = density_distribution(2, J);
  REQUIRE(flat.buckets.size() == 1);
  CHECK(flat.buckets[0].count == 9);
  check_same(flat, density_distribution_exhaustive(2, J, kWalkBudget));
  CHECK_THROWS_AS(density_distribution_exhaustive(20, J, BigInt(1000)), BudgetError);
}

TEST_CASE("binomial lower tail against the sub-gaussian certificate") {
  TailBound t = bad_set_measure(4, Rational(1, 8));
  CHECK(t.member_count == 4);
  CHECK(t.threshold == Rational(13, 6));
  // S < 13/6 means S in {0,1,2}: (1 + 8 + 24) / 81
  CHECK(t.exact == Rational(11, 27));
  CHECK(t.certified);
  CHECK(t.exact <= t.cert);
  // the certificate really sits under exp(-2 sigma^2 J) = exp(-1/8)
  CHECK(to_double(t.cert) == doctest::Approx(std::exp(-0.125)).epsilon(1e-9));
  CHECK(t.cert <= Rational(9, 10));
  CHECK(t.chernoff == doctest::Approx(std::exp(-0.125)).epsilon(1e-12));

  CHECK_THROWS_AS(bad_set_measure(4, Rational(0)), DomainError);
  CHECK_THROWS_AS(bad_set_measure(4, Rational(2, 3)), DomainError);
  CHECK_THROWS_AS(bad_set_measure(4, Rational(7, 10)), DomainError);
}

TEST_CASE("covering sums decrease along the derived ladder") {
  Params p = pipeline_params();
  Derived d = derive(p);
  IndexSet J = IndexSet::derived_mode(p, d);
  REQUIRE(J.members() == std::vector<uint32_t>{4, 7, 13, 14});
  CoveringCertificate c =
      covering_certificate(p, d, J, 1, 3, p.cover_M, Rational(1, 2), Rational(1));
  CHECK(c.M == 3);
  CHECK(c.c_mu == 1);
  CHECK(c.exponent_ok);  // 4 * 1/2 = 2 > 3/2
  CHECK_FALSE(c.all_zero);
  CHECK(c.decreasing);
  CHECK(c.verdict == "covering sums strictly decreasing");
  REQUIRE(c.rows.size() == 3);
  CHECK(c.rows[0].level == 4);
  CHECK(c.rows[1].level == 8);
  CHECK(c.rows[2].level == 16);
  CHECK(c.rows[0].member_count == 1);
  CHECK(c.rows[1].member_count == 2);
  CHECK(c.rows[2].member_count == 4);
  CHECK(c.rows[0].good_count == 54);
  CHECK(c.rows[1].good_count == 2916);
  CHECK(c.rows[2].good_count == BigInt(48) * big_pow3(12));
  CHECK(c.rows[0].branch_count == 9);
  CHECK(c.rows[1].branch_count == 81);
  CHECK(c.rows[2].branch_count == 6561);
  // sums collapse by hand: 2/27, 4/729, 48/3^12, so the logs are exact
  double l3 = std::log(3.0);
  CHECK(c.rows[0].log3_sum == doctest::Approx(std::log(2.0) / l3 - 3).epsilon(1e-9));
  CHECK(c.rows[1].log3_sum == doctest::Approx(std::log(4.0) / l3 - 6).epsilon(1e-9));
  CHECK(c.rows[2].log3_sum == doctest::Approx(std::log(48.0) / l3 - 12).epsilon(1e-9));
  CHECK(c.eps_star_found);
  CHECK(c.eps_star == Rational(7, 16));

  // the monotonicity verdict cannot depend on the comparability constant
  CoveringCertificate big =
      covering_certificate(p, d, J, 1, 3, p.cover_M, Rational(1, 2), Rational(729));
  CHECK(big.c_mu == 729);
  CHECK(big.decreasing == c.decreasing);
  CHECK(big.verdict == c.verdict);
  CHECK(big.eps_star == c.eps_star);
  // constants round up to the next power of three
  CHECK(covering_certificate(p, d, J, 1, 3, p.cover_M, Rational(1, 2), Rational(5)).c_mu == 9);

  CHECK_THROWS_AS(covering_certificate(p, d, J, 0, 3, 3, Rational(1, 2), Rational(1)),
                  DomainError);
  CHECK_THROWS_AS(covering_certificate(p, d, J, 1, 3, 3, Rational(3, 2), Rational(1)),
                  DomainError);
  CHECK_THROWS_AS(covering_certificate(p, d, J, 1, 3, 3, Rational(1, 2), Rational(0)),
                  DomainError);
}

TEST_CASE("flat weights empty every covering sum") {
  Params p = reference();
  Derived d = derive(p);
  IndexSet J = IndexSet::custom({1}, Rational(0));
  CoveringCertificate c = covering_certificate(p, d, J, 1, 2, 3, Rational(1, 2), Rational(1));
  CHECK(c.all_zero);
  CHECK(c.verdict == "all covering sums vanish");
  for (const auto& row : c.rows) CHECK(row.good_count == 0);
}

TEST_CASE("product premeasure comparison on boxes") {
  Params p = reference();
  Derived d = derive(p);
  AppendixReport rep = product_measure_ratio(p, d, Rational(1, 2), 1);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].tiles1 == 41);  // ceil((1/2) / 3^-4)
  CHECK(rep.rows[0].tiles2 == 1);
  CHECK(rep.rows[0].ratio == Rational(82, 81));
  CHECK(rep.rows[1].tiles1 == 3281);
  CHECK(rep.rows[1].tiles2 == 9);
  CHECK(rep.rows[1].ratio == Rational(6562, 6561));
  CHECK(rep.max_ratio == Rational(82, 81));
  CHECK(rep.min_ratio == Rational(6562, 6561));
  CHECK(rep.telescoped);
  CHECK(rep.stable);

  // side exactly one scale length tiles without overhang at every depth
  AppendixReport snug = product_measure_ratio(p, d, Rational(1, 81), 1);
  REQUIRE(snug.rows.size() == 2);
  CHECK(snug.max_ratio == 1);
  CHECK(snug.min_ratio == 1);
  CHECK(snug.telescoped);

  AppendixReport deep = product_measure_ratio(p, d, Rational(1, 2), 2);
  REQUIRE(deep.rows.size() == 1);
  CHECK(deep.rows[0].ratio == Rational(6562, 6561));

  CHECK_THROWS_AS(product_measure_ratio(p, d, Rational(1, 59049), 1), DomainError);
  CHECK_THROWS_AS(product_measure_ratio(p, d, Rational(2), 1), DomainError);
  CHECK_THROWS_AS(product_measure_ratio(p, d, Rational(1, 2), 5), DomainError);
}
