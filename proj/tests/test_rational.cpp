#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qslab/rational.hpp"

using namespace qslab;

TEST_CASE("parsing") {
  CHECK(parse_rational("5/9") == Rational(5, 9));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(parse_rational("6/4") == Rational(3, 2));  // canonicalized
  CHECK(make_rational("1", "3") == Rational(1, 3));
  CHECK_THROWS_AS(parse_rational("x"), ConfigError);
  CHECK_THROWS_AS(make_rational("1", "0"), ConfigError);
  CHECK_THROWS_AS(make_rational("", "2"), ConfigError);
}

TEST_CASE("string round trip") {
  Rational q(-22, 7);
  CHECK(rat_str(q) == "-22/7");
  CHECK(num_str(q) == "-22");
  CHECK(den_str(q) == "7");
  CHECK(rat_str(Rational(4)) == "4");
}

TEST_CASE("powers") {
  CHECK(big_pow3(0) == 1);
  CHECK(big_pow3(8) == 6561);
  CHECK(big_pow(BigInt(2), 10) == 1024);
  CHECK(pow3(-2) == Rational(1, 9));
  CHECK(pow3(3) == 27);
  CHECK(rat_pow(Rational(2, 3), 4) == Rational(16, 81));
  CHECK(rat_pow(Rational(5), 0) == 1);
}

TEST_CASE("exact base-3 logs settle float error") {
  CHECK(floor_log3(Rational(1)) == 0);
  CHECK(floor_log3(Rational(1, 9)) == -2);
  CHECK(floor_log3(Rational(1, 10)) == -3);
  CHECK(floor_log3(Rational(big_pow3(41))) == 41);
  CHECK(floor_log3(Rational(big_pow3(41)) - 1) == 40);
  CHECK(ceil_log3(Rational(1, 9)) == -2);
  CHECK(ceil_log3(Rational(1, 8)) == -1);
  CHECK(ceil_log3(Rational(big_pow3(41)) + 1) == 42);
  CHECK_THROWS_AS(floor_log3(Rational(0)), DomainError);
}

TEST_CASE("log mirrors") {
  CHECK(log2_of(BigInt(1024)) == doctest::Approx(10.0));
  CHECK(log3_of(Rational(1, 243)) == doctest::Approx(-5.0));
  CHECK(to_double(Rational(1, 4)) == 0.25);
}

TEST_CASE("interval arithmetic") {
  RatInterval a(Rational(1, 3), Rational(1, 2));
  RatInterval b(Rational(1, 6));
  CHECK(b.exact());
  RatInterval s = a + b;
  CHECK(s.lo == Rational(1, 2));
  CHECK(s.hi == Rational(2, 3));
  RatInterval d = b - a;  // [1/6 - 1/2, 1/6 - 1/3]
  CHECK(d.lo == Rational(-1, 3));
  CHECK(d.hi == Rational(-1, 6));
  RatInterval ad = abs(d);
  CHECK(ad.lo == Rational(1, 6));
  CHECK(ad.hi == Rational(1, 3));
  RatInterval straddle(Rational(-1, 4), Rational(1, 8));
  CHECK(abs(straddle).lo == 0);
  CHECK(abs(straddle).hi == Rational(1, 4));
  CHECK(b.certainly_le(a));
  CHECK(a.certainly_gt(b));
  CHECK_FALSE(a.certainly_le(a));
  CHECK_THROWS_AS(RatInterval(Rational(1), Rational(0)), DomainError);
}

TEST_CASE("sqrt bracket") {
  RatInterval r = sqrt_bracket(Rational(49, 4));  // exact square
  CHECK(r.exact());
  CHECK(r.lo == Rational(7, 2));
  r = sqrt_bracket(Rational(2));
  CHECK(r.lo * r.lo <= 2);
  CHECK(r.hi * r.hi >= 2);
  CHECK(r.hi - r.lo <= 1);
  r = sqrt_bracket(Rational(2, 10001));
  CHECK(r.lo * r.lo <= Rational(2, 10001));
  CHECK(r.hi * r.hi >= Rational(2, 10001));
  CHECK(r.hi - r.lo <= Rational(1, 10001));
  CHECK(sqrt_bracket(Rational(0)).exact());
  CHECK_THROWS_AS(sqrt_bracket(Rational(-1)), DomainError);
}

TEST_CASE("exp lower bound sits below exp(-t)") {
  for (const char* s : {"0", "1/8", "1/2", "1", "2", "7/3", "10"}) {
    Rational t = parse_rational(s);
    Rational lb = exp_neg_lower_bound(t);
    CHECK(lb > 0);
    CHECK(to_double(lb) <= std::exp(-to_double(t)) + 1e-15);
    // within 1% for the small exponents used by the tail certificates
    if (t <= 2) CHECK(to_double(lb) >= std::exp(-to_double(t)) * 0.99);
  }
  CHECK_THROWS_AS(exp_neg_lower_bound(Rational(-1)), DomainError);
}

TEST_CASE("binomial") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(50, 25) == BigInt("126410606437752"));
}
