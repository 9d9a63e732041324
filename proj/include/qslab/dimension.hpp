#pragma once

#include <string>
#include <vector>

#include "qslab/riesz.hpp"

namespace qslab {

// One value class of the digit statistic S = #{member digits != 1} at a fixed
// ternary level: S is constant on level cells, so the level partitions into
// buckets k = 0..|members|.
struct DensityBucket {
  uint32_t k = 0;
  BigInt count;       // cells with S = k
  Rational lebesgue;  // count / 3^level
  Theta theta;        // density exponent pair (1-a)^k (1+2a)^(members-k)
};

struct DensityDistribution {
  uint32_t level = 0;
  uint32_t member_count = 0;
  std::vector<DensityBucket> buckets;  // indexed by k
};

// Closed form: count(k) = C(J,k) 2^k 3^(level-J), J = members <= level.
DensityDistribution density_distribution(uint32_t level, const IndexSet& J);

// Oracle: walks all 3^level cells. Throws BudgetError past `budget`.
DensityDistribution density_distribution_exhaustive(uint32_t level, const IndexSet& J,
                                                    const BigInt& budget);

// Exact lower tail of S ~ Bin(J, 2/3) against the sub-Gaussian bound
// exp(-2 sigma^2 J). The certificate route stays rational: exact <= cert and
// cert <= exp(-2 sigma^2 J) by construction of the bound.
struct TailBound {
  uint32_t member_count = 0;
  Rational sigma;
  Rational threshold;  // (2/3 - sigma) J; the tail is {S < threshold}
  Rational exact;
  Rational cert;       // rational lower bound of exp(-2 sigma^2 J)
  double chernoff = 0; // float mirror of the true bound
  bool certified = false;
};

TailBound bad_set_measure(uint32_t member_count, const Rational& sigma);

// Cells at `level` whose density product is <= (3^-level)^M. Compared after
// clearing denominators: with a = p/q, theta(k) <= 3^(-M level) iff
// (q-p)^k (q+2p)^(J-k) 3^(M level) <= q^J.
BigInt good_interval_count(uint32_t level, const IndexSet& J, uint32_t M);

struct CoveringRow {
  uint32_t n = 0;      // scale index
  uint32_t level = 0;  // ternary depth e_n
  uint32_t member_count = 0;
  BigInt good_count;
  BigInt branch_count;  // intervals of the nested family at scale n
  Rational sum_pow;     // sum_n raised to den(epsilon), c_mu factor included
  double log3_sum = 0;  // float mirror of log3 sum_n
};

struct CoveringCertificate {
  uint32_t M = 0;
  Rational epsilon;
  Rational c_mu;            // rounded up to a power of 3
  bool exponent_ok = false; // (1+M) epsilon > 1 + (d-1) s
  bool decreasing = false;  // sums strictly decreasing over the row range
  bool all_zero = false;    // every sum vanishes (no qualifying cells)
  std::vector<CoveringRow> rows;
  Rational eps_star;        // smallest sixteenth with exponent_ok + decreasing
  bool eps_star_found = false;
  std::string verdict;
};

// Exact covering sums good_count * branch^(d-1) * (c_mu r_n^(1+M))^epsilon
// over n in [n_lo, n_hi], compared via their den(epsilon)-th powers. The
// strict-decrease verdict does not depend on c_mu (a common factor).
CoveringCertificate covering_certificate(const Params& p, const Derived& d, const IndexSet& J,
                                         uint32_t n_lo, uint32_t n_hi, uint32_t M,
                                         const Rational& epsilon, const Rational& c_mu);

// Product-premeasure comparison for boxes Q1 x Q2, Q1 an interval of rational
// length, Q2 a scale-n interval of the nested family. The scale-m cover uses
// the family's own intervals, so count_m r_m^s = r_n^s telescopes exactly and
// the ratio premeasure/product stays in [1, 2].
struct AppendixRow {
  uint32_t m = 0;
  BigInt tiles1;        // intervals of length r_m covering Q1
  BigInt tiles2;        // scale-m intervals inside Q2
  Rational premeasure;  // tiles1 tiles2 r_m^(1+s)
  Rational product;     // |Q1| tiles2 r_m^s
  Rational ratio;
};

struct AppendixReport {
  uint32_t n = 0;
  Rational q1_len;
  std::vector<AppendixRow> rows;  // m = n..depth with r_m <= |Q1|
  Rational max_ratio, min_ratio;
  bool telescoped = false;  // every product equals |Q1| r_n^s exactly
  bool stable = false;      // max_ratio <= 4 min_ratio
};

AppendixReport product_measure_ratio(const Params& p, const Derived& d, const Rational& q1_len,
                                     uint32_t n);

}  // namespace qslab
