#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qslab/params.hpp"

using namespace qslab;

namespace {

Params reference() {
  Params p;
  p.s = {1, 1};  // 1/2
  p.alpha = Rational(1, 2);
  p.depth = 2;
  p.exponents = canonical_exponents(p.s.m, p.depth);
  return p;
}

}  // namespace

TEST_CASE("canonical exponent schedule") {
  CHECK(canonical_exponents(1, 3) == std::vector<uint64_t>{0, 4, 8, 16});
  CHECK(canonical_exponents(2, 2) == std::vector<uint64_t>{0, 8, 16});
}

TEST_CASE("reference ladder") {
  Params p = reference();
  Derived d = derive(p);
  REQUIRE(d.levels.size() == 3);
  CHECK(d.levels[0].m == 1);
  CHECK(d.levels[0].r == 1);
  CHECK(d.levels[1].m == 9);
  CHECK(d.levels[1].r == Rational(1, 81));
  CHECK(d.levels[1].gap == Rational(1, 9));
  CHECK(d.levels[1].stride == Rational(1, 81) + Rational(1, 9));
  CHECK(d.levels[2].m == 9);
  CHECK(d.levels[2].r == Rational(1, 6561));
  CHECK(d.levels[2].gap == Rational(1, 729));
  CHECK(d.D == 4);
  CHECK(d.tau == Rational(2, 3));
  CHECK(d.c_inf == 15);
  CHECK(d.d_prime == doctest::Approx(0.3690702464));
}

TEST_CASE("coarse similarity ladder") {
  // s = 3/4, canonical depth 1: e_1 = 8, m_1 = 3^6 = 729
  Params p;
  p.s = {3, 2};
  p.alpha = Rational(1, 2);
  p.depth = 1;
  p.exponents = canonical_exponents(p.s.m, p.depth);
  REQUIRE(p.exponents == std::vector<uint64_t>{0, 8});
  Derived d = derive(p);
  CHECK(d.levels[1].m == 729);
  CHECK(d.levels[1].r == Rational(1, 6561));
  CHECK(d.levels[1].gap == Rational(1, 819));  // (1 - 729/6561) / 728
}

TEST_CASE("hard errors") {
  Params p = reference();
  p.exponents = {0, 1, 8};  // 1 * 1/2 is not an integer exponent
  CHECK_THROWS_AS(derive(p), ConfigError);
  p = reference();
  p.exponents = {0, 8, 4};
  CHECK_THROWS_AS(derive(p), ConfigError);
  p = reference();
  p.exponents = {1, 4, 8};
  CHECK_THROWS_AS(derive(p), ConfigError);
  p = reference();
  p.depth = 1;
  CHECK_THROWS_AS(derive(p), ConfigError);  // depth/scale mismatch
  p = reference();
  p.alpha = Rational(1);
  CHECK_THROWS_AS(derive(p), ConfigError);
  p = reference();
  p.alpha = Rational(-1, 4);
  CHECK_THROWS_AS(derive(p), ConfigError);
  p = reference();
  p.s = {0, 1};
  CHECK_THROWS_AS(derive(p), ConfigError);
}

TEST_CASE("advisory rows on the reference ladder") {
  Params p = reference();
  Derived d = derive(p);
  auto rows = validate(p, d);
  auto find = [&](const std::string& name) -> const CheckRow& {
    for (const auto& r : rows)
      if (r.name == name) return r;
    static CheckRow missing;
    REQUIRE(false);
    return missing;
  };
  // known margins of this ladder: gap_1 = 1/9 exceeds r_0/10, and the
  // level-2 spacing holds with equality so the strict form fails
  CHECK_FALSE(find("spacing-upper-1").passed);
  CHECK(find("spacing-lower-1").passed);
  CHECK_FALSE(find("spacing-lower-2").passed);
  CHECK(find("mass-identity-1").passed);
  CHECK(find("mass-identity-2").passed);
  CHECK(find("canonical-exponents").passed);
  for (const auto& r : rows)
    if (r.severity == CheckRow::error) CHECK(r.passed);
}

TEST_CASE("mass identity holds on every valid ladder") {
  for (auto [pnum, pden, depth] : {std::tuple<uint64_t, uint32_t, uint32_t>{1, 1, 3},
                                   {1, 2, 2}, {3, 2, 2}, {7, 3, 2}}) {
    Params p;
    p.s = {pnum, pden};
    p.alpha = Rational(1, 3);
    p.depth = depth;
    p.exponents = canonical_exponents(p.s.m, p.depth);
    Derived d = derive(p);
    BigInt prod = 1;
    for (uint32_t n = 1; n <= depth; ++n) prod *= d.levels[n].m;
    BigInt se = BigInt(p.exponents[depth]) * BigInt(p.s.p) / big_pow(2, p.s.m);
    CHECK(prod == big_pow3(se.get_ui()));
  }
}

TEST_CASE("pipeline derivation") {
  Pipeline pip = derive_pipeline(2, {1, 1}, Rational(1, 2));
  CHECK(pip.M == 3);
  CHECK(pip.N == 12);
  CHECK(pip.sigma == Rational(1, 8));
  CHECK(pip.bits == 64);
  // alpha is a 64-bit dyadic a hair under 1
  CHECK(pip.alpha < 1);
  CHECK(pip.alpha > Rational(999999, 1000000));
  CHECK(pip.alpha.get_den() <= big_pow(2, 64));
  // the root bracket straddles the defining equation
  // (1-a)^13 (1+2a)^11 = 3^-288/24 = 3^-12, exponents cleared by q = 24
  CHECK(pip.residual_lo <= pip.alpha);
  CHECK(pip.alpha <= pip.residual_hi);
  CHECK(pip.residual_hi - pip.residual_lo <= Rational(1, big_pow(2, 64)));
  auto product = [](const Rational& a) -> Rational {
    return rat_pow(1 - a, 13) * rat_pow(1 + 2 * a, 11) * Rational(big_pow3(288));
  };
  CHECK(product(pip.residual_lo) >= 1);
  CHECK(product(pip.residual_hi) < 1);
}

TEST_CASE("pipeline scaling in d") {
  // d = 3 raises the exponent target: (1+M)/2 > 1 + 2 * 1/2 = 2 so M = 4
  Pipeline pip = derive_pipeline(3, {1, 1}, Rational(1, 2));
  CHECK(pip.M == 4);
  CHECK(pip.N == 16);
  CHECK_THROWS_AS(derive_pipeline(1, {1, 1}, Rational(1, 2)), ConfigError);
  CHECK_THROWS_AS(derive_pipeline(2, {1, 1}, Rational(1)), ConfigError);
}
