#include "qslab/riesz.hpp"

#include <algorithm>

namespace qslab {

IndexSet IndexSet::derived_mode(const Params& p, const Derived& d) {
  IndexSet out;
  out.alpha_ = p.alpha;
  BigInt floor_cut = big_pow(2, p.n_alpha + p.s.m);  // members need (j-1) > this
  for (uint32_t n = 1; n <= p.depth; ++n) {
    const Rational& gap = d.levels[n].gap;
    uint64_t e_n = p.exponents[n];
    // 3^-(j-1) <= gap_n  <=>  (j-1) >= ceil_log3(1/gap_n)
    long lo = ceil_log3(1 / gap);
    // 3^-(j-1) > 3^(n-1) r_n  <=>  (j-1) <= e_n - n
    long hi = static_cast<long>(e_n) - static_cast<long>(n);
    for (long jm1 = lo; jm1 <= hi; ++jm1) {
      if (BigInt(jm1) <= floor_cut) continue;
      out.members_.push_back(static_cast<uint32_t>(jm1 + 1));
    }
  }
  std::sort(out.members_.begin(), out.members_.end());
  out.members_.erase(std::unique(out.members_.begin(), out.members_.end()), out.members_.end());
  return out;
}

IndexSet IndexSet::custom(std::vector<uint32_t> members, const Rational& alpha) {
  if (alpha < 0 || alpha >= 1) throw ConfigError("alpha must lie in [0,1)");
  IndexSet out;
  out.members_ = std::move(members);
  out.alpha_ = alpha;
  std::sort(out.members_.begin(), out.members_.end());
  out.members_.erase(std::unique(out.members_.begin(), out.members_.end()), out.members_.end());
  if (!out.members_.empty() && out.members_.front() == 0)
    throw ConfigError("index set members are 1-based digit positions");
  return out;
}

bool IndexSet::contains(uint32_t j) const {
  return std::binary_search(members_.begin(), members_.end(), j);
}

uint32_t IndexSet::count_upto(uint32_t level) const {
  return static_cast<uint32_t>(
      std::upper_bound(members_.begin(), members_.end(), level) - members_.begin());
}

std::vector<uint32_t> IndexSet::members_upto(uint32_t level) const {
  auto end = std::upper_bound(members_.begin(), members_.end(), level);
  return {members_.begin(), end};
}

Theta theta_of(const TernaryAddress& a, const IndexSet& J) {
  Theta t;
  for (uint32_t j : J.members()) {
    if (j > a.level()) break;
    ++t.count;
    if (a.digit(j) == 1) ++t.ones;
  }
  return t;
}

Theta theta_leftmost(uint32_t level, const IndexSet& J) {
  return {0, J.count_upto(level)};
}

Rational theta_value(const Theta& t, const Rational& alpha) {
  return rat_pow(1 + 2 * alpha, t.ones) * rat_pow(1 - alpha, t.count - t.ones);
}

Rational mass_value(const CellMass& c, const Rational& alpha) {
  return theta_value(c.theta, alpha) * pow3(-static_cast<long>(c.level));
}

double mass_log3(const CellMass& c, const Rational& alpha) {
  double v = 0;
  if (c.theta.ones) v += c.theta.ones * log3_of(1 + 2 * alpha);
  if (c.theta.count - c.theta.ones) v += (c.theta.count - c.theta.ones) * log3_of(1 - alpha);
  return v - static_cast<double>(c.level);
}

namespace {

// mu of [lo, hi) given as integer multiples of 3^-grid inside one period,
// assembled from maximal aligned ternary blocks.
Rational mu_span(BigInt lo, const BigInt& hi, const IndexSet& J, uint32_t grid, const Rational& alpha) {
  Rational total = 0;
  while (lo < hi) {
    uint32_t k = 0;  // block size 3^k cells, aligned and fitting
    BigInt sz = 1;
    while (k < grid) {
      BigInt nsz = sz * 3;
      if (!mpz_divisible_p(lo.get_mpz_t(), nsz.get_mpz_t())) break;
      if (lo + nsz > hi) break;
      sz = nsz;
      ++k;
    }
    TernaryAddress cell = address_from_index(lo / sz, grid - k);
    total += mass_value(mu_cell(cell, J), alpha);
    lo += sz;
  }
  return total;
}

}  // namespace

Rational mu_interval(const Rational& a, const Rational& b, const IndexSet& J, uint32_t grid) {
  if (a < 0 || b < a) throw DomainError("mu_interval needs 0 <= a <= b");
  if (!on_grid(a, grid) || !on_grid(b, grid))
    throw DomainError("mu_interval endpoint off the level-" + std::to_string(grid) + " grid");
  BigInt period = big_pow3(grid);
  BigInt lo = a.get_num() * period / a.get_den();
  BigInt hi = b.get_num() * period / b.get_den();
  // whole periods carry mass 1 each
  BigInt whole = (hi - lo) / period;
  Rational total(whole);
  hi -= whole * period;
  BigInt shift;
  mpz_fdiv_q(shift.get_mpz_t(), lo.get_mpz_t(), period.get_mpz_t());
  lo -= shift * period;
  hi -= shift * period;
  if (hi <= period) return total + mu_span(lo, hi, J, grid, J.alpha());
  return total + mu_span(lo, period, J, grid, J.alpha()) +
         mu_span(BigInt(0), hi - period, J, grid, J.alpha());
}

RatInterval mu_interval_enclosure(const Rational& a, const RatInterval& len, const IndexSet& J,
                                  uint32_t grid) {
  if (len.lo < 0) throw DomainError("negative length");
  Rational step = pow3(-static_cast<long>(grid));
  // round the far endpoint outward to the grid
  auto floor_grid = [&](const Rational& t) {
    BigInt cells = t.get_num() * big_pow3(grid);
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), cells.get_mpz_t(), t.get_den().get_mpz_t());
    Rational out(q, big_pow3(grid));
    out.canonicalize();
    return out;
  };
  Rational b_lo = floor_grid(a + len.lo);
  Rational b_hi = floor_grid(a + len.hi);
  if (b_hi < a + len.hi) b_hi += step;
  if (b_lo < a) b_lo = a;
  return {mu_interval(a, b_lo, J, grid), mu_interval(a, b_hi, J, grid)};
}

}  // namespace qslab
