#include "qslab/dimension.hpp"

#include <cmath>
#include <limits>

namespace qslab {

DensityDistribution density_distribution(uint32_t level, const IndexSet& J) {
  DensityDistribution out;
  out.level = level;
  out.member_count = J.count_upto(level);
  uint32_t jc = out.member_count;
  BigInt free_cells = big_pow3(level - jc);  // non-member digits vary freely
  BigInt period = big_pow3(level);
  out.buckets.reserve(jc + 1);
  for (uint32_t k = 0; k <= jc; ++k) {
    DensityBucket b;
    b.k = k;
    b.count = binomial(jc, k) * big_pow(BigInt(2), k) * free_cells;
    b.lebesgue = Rational(b.count, period);
    b.lebesgue.canonicalize();
    b.theta = {jc - k, jc};
    out.buckets.push_back(std::move(b));
  }
  return out;
}

DensityDistribution density_distribution_exhaustive(uint32_t level, const IndexSet& J,
                                                    const BigInt& budget) {
  BigInt total = big_pow3(level);
  if (total > budget)
    throw BudgetError("cell walk at level " + std::to_string(level) + " needs " +
                      total.get_str() + " cells");
  DensityDistribution out;
  out.level = level;
  out.member_count = J.count_upto(level);
  uint32_t jc = out.member_count;
  BigInt period = total;
  out.buckets.resize(jc + 1);
  for (uint32_t k = 0; k <= jc; ++k) {
    out.buckets[k].k = k;
    out.buckets[k].count = 0;
    out.buckets[k].theta = {jc - k, jc};
  }
  TernaryAddress cell(level);
  for (BigInt i = 0; i < total; ++i) {
    Theta t = theta_of(cell, J);
    out.buckets.at(t.count - t.ones).count += 1;
    // odometer step
    for (uint32_t d = level; d >= 1; --d) {
      unsigned v = cell.digit(d);
      if (v < 2) {
        cell.set_digit(d, v + 1);
        break;
      }
      cell.set_digit(d, 0);
    }
  }
  for (uint32_t k = 0; k <= jc; ++k) {
    out.buckets[k].lebesgue = Rational(out.buckets[k].count, period);
    out.buckets[k].lebesgue.canonicalize();
  }
  return out;
}

TailBound bad_set_measure(uint32_t member_count, const Rational& sigma) {
  if (sigma <= 0 || sigma >= Rational(2, 3))
    throw DomainError("deviation parameter must lie in (0, 2/3)");
  TailBound out;
  out.member_count = member_count;
  out.sigma = sigma;
  out.threshold = (Rational(2, 3) - sigma) * member_count;
  // largest k with k < threshold (strict)
  BigInt kmax;
  mpz_fdiv_q(kmax.get_mpz_t(), out.threshold.get_num().get_mpz_t(),
             out.threshold.get_den().get_mpz_t());
  if (mpz_divisible_p(out.threshold.get_num().get_mpz_t(), out.threshold.get_den().get_mpz_t()))
    kmax -= 1;
  if (kmax > member_count) kmax = member_count;
  out.exact = 0;
  if (kmax >= 0) {
    unsigned long top = kmax.get_ui();
    Rational scale(1, big_pow3(member_count));  // (2/3)^k (1/3)^(J-k) = 2^k / 3^J
    for (unsigned long k = 0; k <= top; ++k)
      out.exact += Rational(binomial(member_count, k) * big_pow(BigInt(2), k)) * scale;
  }
  Rational t = 2 * sigma * sigma * member_count;
  out.cert = exp_neg_lower_bound(t);
  out.chernoff = std::exp(-to_double(t));
  out.certified = out.exact <= out.cert;
  return out;
}

BigInt good_interval_count(uint32_t level, const IndexSet& J, uint32_t M) {
  uint32_t jc = J.count_upto(level);
  BigInt p = J.alpha().get_num(), q = J.alpha().get_den();
  BigInt rhs = big_pow(q, jc);
  BigInt scale = big_pow3(static_cast<unsigned long>(M) * level);
  BigInt free_cells = big_pow3(level - jc);
  BigInt total = 0;
  for (uint32_t k = 0; k <= jc; ++k) {
    BigInt lhs = big_pow(q - p, k) * big_pow(q + 2 * p, jc - k) * scale;
    if (lhs <= rhs) total += binomial(jc, k) * big_pow(BigInt(2), k) * free_cells;
  }
  return total;
}

namespace {

// n-th covering sum raised to den(epsilon), with the c_mu^num(epsilon) factor
Rational covering_sum_pow(const BigInt& good, const BigInt& branch, uint32_t dims, uint32_t level,
                          uint32_t M, const Rational& epsilon, const Rational& c_mu) {
  unsigned long qe = epsilon.get_den().get_ui();
  unsigned long pe = epsilon.get_num().get_ui();
  Rational out(big_pow(good, qe) * big_pow(branch, qe * (dims - 1)));
  out *= rat_pow(c_mu, pe);
  out *= pow3(-static_cast<long>(pe) * (1 + static_cast<long>(M)) * static_cast<long>(level));
  return out;
}

}  // namespace

CoveringCertificate covering_certificate(const Params& p, const Derived& d, const IndexSet& J,
                                         uint32_t n_lo, uint32_t n_hi, uint32_t M,
                                         const Rational& epsilon, const Rational& c_mu) {
  if (n_lo < 1 || n_hi > p.depth || n_lo > n_hi) throw DomainError("bad scale range");
  if (epsilon <= 0 || epsilon > 1) throw DomainError("holder exponent must lie in (0, 1]");
  if (c_mu <= 0) throw DomainError("comparability constant must be positive");
  CoveringCertificate out;
  out.M = M;
  out.epsilon = epsilon;
  out.c_mu = pow3(ceil_log3(c_mu));
  Rational s = p.s.value();
  out.exponent_ok = (1 + M) * epsilon > 1 + (p.dims - 1) * s;

  std::vector<BigInt> branch(p.depth + 1);
  branch[0] = d.levels[0].m;
  for (uint32_t k = 1; k <= p.depth; ++k) branch[k] = branch[k - 1] * d.levels[k].m;

  for (uint32_t n = n_lo; n <= n_hi; ++n) {
    CoveringRow row;
    row.n = n;
    row.level = p.depth_of(n);
    row.member_count = J.count_upto(row.level);
    row.good_count = good_interval_count(row.level, J, M);
    row.branch_count = branch[n];
    row.sum_pow =
        covering_sum_pow(row.good_count, row.branch_count, p.dims, row.level, M, epsilon, out.c_mu);
    row.log3_sum = row.sum_pow > 0
                       ? log3_of(row.sum_pow) / static_cast<double>(epsilon.get_den().get_ui())
                       : -std::numeric_limits<double>::infinity();
    out.rows.push_back(std::move(row));
  }

  out.all_zero = true;
  for (const auto& row : out.rows)
    if (row.sum_pow != 0) out.all_zero = false;
  out.decreasing = out.rows.size() >= 2;
  for (size_t i = 0; i + 1 < out.rows.size(); ++i)
    if (!(out.rows[i].sum_pow > out.rows[i + 1].sum_pow)) out.decreasing = false;

  // smallest sixteenth of the exponent grid that already certifies
  for (uint32_t t = 1; t <= 16 && !out.eps_star_found; ++t) {
    Rational eps(t, 16);
    eps.canonicalize();
    if (!((1 + M) * eps > 1 + (p.dims - 1) * s)) continue;
    bool dec = out.rows.size() >= 2;
    for (size_t i = 0; i + 1 < out.rows.size() && dec; ++i) {
      Rational a = covering_sum_pow(out.rows[i].good_count, out.rows[i].branch_count, p.dims,
                                    out.rows[i].level, M, eps, out.c_mu);
      Rational b = covering_sum_pow(out.rows[i + 1].good_count, out.rows[i + 1].branch_count,
                                    p.dims, out.rows[i + 1].level, M, eps, out.c_mu);
      dec = a > b;
    }
    if (dec) {
      out.eps_star = eps;
      out.eps_star_found = true;
    }
  }

  if (!out.exponent_ok)
    out.verdict = "exponent condition unmet";
  else if (out.all_zero)
    out.verdict = "all covering sums vanish";
  else if (out.decreasing)
    out.verdict = "covering sums strictly decreasing";
  else
    out.verdict = "covering sums not monotone";
  return out;
}

AppendixReport product_measure_ratio(const Params& p, const Derived& d, const Rational& q1_len,
                                     uint32_t n) {
  if (q1_len <= 0 || q1_len > 1) throw DomainError("side length must lie in (0, 1]");
  if (n > p.depth) throw DomainError("scale index beyond working depth");
  AppendixReport out;
  out.n = n;
  out.q1_len = q1_len;

  std::vector<BigInt> branch(p.depth + 1);
  branch[0] = d.levels[0].m;
  for (uint32_t k = 1; k <= p.depth; ++k) branch[k] = branch[k - 1] * d.levels[k].m;

  // fractional scale powers straight from the exponents: s e_m is an integer
  // for every valid ladder, so r_m^s = 3^(-s e_m) exactly
  auto scale_pow_s = [&](uint32_t m) {
    BigInt s_em = BigInt(p.s.p) * BigInt(p.depth_of(m));
    BigInt two_m = big_pow(2, p.s.m);
    if (!mpz_divisible_p(s_em.get_mpz_t(), two_m.get_mpz_t()))
      throw DomainError("scale exponent times s is not an integer");
    return Rational(1, big_pow(BigInt(3), BigInt(s_em / two_m).get_ui()));
  };
  Rational target = q1_len * scale_pow_s(n);

  out.telescoped = true;
  for (uint32_t m = n; m <= p.depth; ++m) {
    const Rational& rm = d.levels[m].r;
    if (rm > q1_len) continue;  // cover pieces may not exceed the Q1 side
    AppendixRow row;
    row.m = m;
    BigInt num = q1_len.get_num() * big_pow3(p.depth_of(m));
    mpz_cdiv_q(row.tiles1.get_mpz_t(), num.get_mpz_t(), q1_len.get_den().get_mpz_t());
    row.tiles2 = branch[m] / branch[n];  // construction data, not exponents
    Rational rm_s = scale_pow_s(m);
    row.product = q1_len * Rational(row.tiles2) * rm_s;
    row.premeasure = Rational(row.tiles1 * row.tiles2) * rm * rm_s;
    row.ratio = row.premeasure / row.product;
    // count_m r_m^s = r_n^s is the mass identity along the ladder; failure
    // here means the branch products and the exponents disagree
    if (row.product != target) out.telescoped = false;
    out.rows.push_back(std::move(row));
  }
  if (out.rows.empty()) throw DomainError("no admissible cover scale: side below the finest scale");

  out.max_ratio = out.rows.front().ratio;
  out.min_ratio = out.rows.front().ratio;
  for (const auto& row : out.rows) {
    if (row.ratio > out.max_ratio) out.max_ratio = row.ratio;
    if (row.ratio < out.min_ratio) out.min_ratio = row.ratio;
  }
  out.stable = out.max_ratio <= 4 * out.min_ratio;
  return out;
}

}  // namespace qslab
