#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qslab/cantor.hpp"

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

}  // namespace

TEST_CASE("root and extreme children") {
  Params p = reference();
  Derived d = derive(p);
  CantorSystem cs(p, d);
  CHECK(cs.depth() == 2);
  CHECK(CantorSystem::root_left() == Rational(-1, 2));
  CHECK(cs.count_at(0) == 1);
  CHECK(cs.count_at(1) == 9);
  CHECK(cs.count_at(2) == 81);

  // first child is flush left: left = -1/2, width 1/81
  std::vector<BigInt> first{BigInt(0)};
  CHECK(cs.left_of(first) == Rational(-1, 2));
  CHECK(cs.mid_of(first) == Rational(-1, 2) + Rational(1, 162));
  CHECK(cs.right_of(first) == Rational(-1, 2) + Rational(1, 81));
  // last child is flush right
  std::vector<BigInt> last{BigInt(8)};
  CHECK(cs.right_of(last) == Rational(1, 2));
  // stride = r + gap = 1/81 + 1/9
  std::vector<BigInt> second{BigInt(1)};
  CHECK(cs.left_of(second) - cs.left_of(first) == Rational(1, 81) + Rational(1, 9));
}

TEST_CASE("depth-2 midpoints and symmetry") {
  Params p = reference();
  Derived d = derive(p);
  CantorSystem cs(p, d);
  std::vector<BigInt> ll{BigInt(0), BigInt(0)};
  CHECK(cs.mid_of(ll) == Rational(-1, 2) + Rational(1, 13122));
  std::vector<BigInt> rr{BigInt(8), BigInt(8)};
  CHECK(cs.mid_of(rr) + cs.mid_of(ll) == 0);
  // parent midpoint at level 1 vs level 0
  CHECK(cs.parent_mid(ll, 0) == 0);
  CHECK(cs.parent_mid(ll, 1) == cs.mid_of(std::vector<BigInt>{BigInt(0)}));
}

TEST_CASE("locate inverts midpoints and flags gaps") {
  Params p = reference();
  Derived d = derive(p);
  CantorSystem cs(p, d);
  for (long i : {0L, 3L, 8L}) {
    for (long j : {0L, 5L, 8L}) {
      std::vector<BigInt> path{BigInt(i), BigInt(j)};
      CHECK(cs.locate(cs.mid_of(path), 2) == path);
      CHECK(cs.locate(cs.left_of(path), 2) == path);
      CHECK(cs.locate(cs.right_of(path), 2) == path);
    }
  }
  // center of the first level-1 gap
  Rational gap_point = Rational(-1, 2) + Rational(1, 81) + Rational(1, 18);
  CHECK_THROWS_AS(cs.locate(gap_point, 1), DomainError);
  CHECK_THROWS_AS(cs.locate(Rational(2, 3), 1), DomainError);    // outside the root
  CHECK_THROWS_AS(cs.locate(Rational(-2, 3), 1), DomainError);
}

TEST_CASE("enumerate respects order and budget") {
  Params p = reference();
  Derived d = derive(p);
  CantorSystem cs(p, d);
  Rational prev = Rational(-1);
  uint64_t count = 0;
  cs.enumerate(2, BigInt(100), [&](const std::vector<BigInt>& path, const Rational& left) {
    CHECK(path.size() == 2);
    CHECK(left > prev);
    prev = left;
    ++count;
  });
  CHECK(count == 81);
  CHECK_THROWS_AS(cs.enumerate(2, BigInt(80), [](const auto&, const auto&) {}),
                  BudgetError);
}

TEST_CASE("deep ladder stays exact") {
  Params p;
  p.s = {1, 1};
  p.alpha = Rational(1, 2);
  p.depth = 3;
  p.exponents = canonical_exponents(p.s.m, p.depth);  // leaf scale 3^-16
  Derived d = derive(p);
  CantorSystem cs(p, d);
  CHECK(d.levels[3].m == 81);
  CHECK(cs.count_at(3) == big_pow3(8));
  std::vector<BigInt> path{BigInt(4), BigInt(4), BigInt(57)};
  CHECK(cs.locate(cs.mid_of(path), 3) == path);
}
