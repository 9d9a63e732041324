#pragma once

#include <functional>
#include <vector>

#include "qslab/params.hpp"

namespace qslab {

// Nested interval families on [-1/2, 1/2]: level n has prod_{k<=n} m_k closed
// intervals of length r_n, packed flush against the parent ends with equal
// gaps between siblings. A point of the construction at working depth N is an
// index path (i_1 .. i_N), i_k in [0, m_k); its value is the midpoint of the
// depth-N interval.
class CantorSystem {
 public:
  CantorSystem(const Params& p, const Derived& d) : params_(p), derived_(d) {}

  uint32_t depth() const { return params_.depth; }
  const ScaleLevel& level(uint32_t n) const { return derived_.levels.at(n); }

  Rational left_of(const std::vector<BigInt>& path) const;
  Rational mid_of(const std::vector<BigInt>& path) const;
  Rational right_of(const std::vector<BigInt>& path) const;

  // Midpoint of the level-n ancestor; path may be deeper than n.
  Rational parent_mid(const std::vector<BigInt>& path, uint32_t n) const;

  // Locates y inside the level-`depth` family. Throws DomainError if y falls
  // in a gap (or outside the root) at some level.
  std::vector<BigInt> locate(const Rational& y, uint32_t depth) const;

  BigInt count_at(uint32_t n) const;

  // Enumerates level-n intervals in order; throws BudgetError if the count
  // exceeds `budget`. The callback gets (path, left endpoint).
  void enumerate(uint32_t n, const BigInt& budget,
                 const std::function<void(const std::vector<BigInt>&, const Rational&)>& fn) const;

  static Rational root_left() { return Rational(-1, 2); }

 private:
  Params params_;
  Derived derived_;
};

}  // namespace qslab
