#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qslab/ternary.hpp"

using namespace qslab;

TEST_CASE("digits of 5/9") {
  TernaryAddress a = address_of(Rational(5, 9), 2);
  CHECK(a.level() == 2);
  CHECK(a.digit(1) == 1);
  CHECK(a.digit(2) == 2);
  CHECK(a.wraps() == 0);
  CHECK(a.left() == Rational(5, 9));
  CHECK(a.index() == 5);
}

TEST_CASE("floor semantics") {
  // interior point lands in the cell to its left
  TernaryAddress a = address_of(Rational(1, 2), 1);
  CHECK(a.digit(1) == 1);  // 1/2 in [1/3, 2/3)
  // grid points own their cell
  CHECK(address_of(Rational(1, 3), 1).digit(1) == 1);
  CHECK(address_of(Rational(1, 3) - Rational(1, 1000), 1).digit(1) == 0);
}

TEST_CASE("index round trip at depth past one word") {
  // 40 digits spill into a second packed word
  BigInt idx = BigInt("9876543210987654321");
  TernaryAddress a = address_from_index(idx, 40);
  CHECK(a.index() == idx);
  CHECK(a.level() == 40);
  TernaryAddress b = address_of(a.left(), 40);
  CHECK(a == b);
}

TEST_CASE("neighbor and wrap") {
  TernaryAddress a = parse_address("0212");
  TernaryAddress b = a.right_neighbor();
  CHECK(b.index() == a.index() + 1);
  TernaryAddress last = parse_address("2222");
  TernaryAddress wrapped = last.right_neighbor();
  CHECK(wrapped.index() == 0);
  CHECK(wrapped.wraps() == 1);
  CHECK(wrapped.left() == 1);  // 0 + one period
}

TEST_CASE("negative input wraps below zero") {
  TernaryAddress a = address_of(Rational(-1, 9), 2);
  CHECK(a.wraps() == -1);
  CHECK(a.digit(1) == 2);
  CHECK(a.digit(2) == 2);  // -1/9 = -1 + 8/9
  CHECK(a.left() == Rational(-1, 9));
}

TEST_CASE("prefix keeps wraps") {
  TernaryAddress a = address_of(Rational(14, 9) , 4);
  CHECK(a.wraps() == 1);
  TernaryAddress p = a.prefix(2);
  CHECK(p.level() == 2);
  CHECK(p.wraps() == 1);
  CHECK(p.digit(1) == 1);
  CHECK(p.digit(2) == 2);  // 14/9 = 1 + 0.12(3)
}

TEST_CASE("width right and on_grid") {
  TernaryAddress a = parse_address("102");
  CHECK(a.width() == Rational(1, 27));
  CHECK(a.right() == a.left() + Rational(1, 27));
  CHECK(on_grid(Rational(11, 27), 3));
  CHECK_FALSE(on_grid(Rational(11, 27), 2));
  CHECK(on_grid(Rational(2), 0));
}

TEST_CASE("parse rejects bad digits") {
  CHECK_THROWS_AS(parse_address("0123"), ConfigError);
  CHECK(parse_address("").level() == 0);
}

TEST_CASE("to_string marks wraps") {
  TernaryAddress a = address_of(Rational(4, 3), 1);
  CHECK(a.to_string() == "0.1(3)+1");
  CHECK(parse_address("21").to_string() == "0.21(3)");
}
