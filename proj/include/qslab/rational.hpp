#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qslab {

// Exact scalar carrier for the whole lab: arbitrary-precision rationals kept
// in canonical form (gcd-reduced, positive denominator) by GMP.
using Rational = mpq_class;
using BigInt = mpz_class;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CheckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rational make_rational(const std::string& num, const std::string& den) {
  if (num.empty() || den.empty()) throw ConfigError("empty rational component");
  BigInt n, d;
  if (n.set_str(num, 10) != 0) throw ConfigError("bad numerator: " + num);
  if (d.set_str(den, 10) != 0) throw ConfigError("bad denominator: " + den);
  if (d == 0) throw ConfigError("zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

// "p/q" or plain integer string.
inline Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return make_rational(text, "1");
  return make_rational(text.substr(0, slash), text.substr(slash + 1));
}

inline std::string num_str(const Rational& q) { return q.get_num().get_str(); }
inline std::string den_str(const Rational& q) { return q.get_den().get_str(); }
inline std::string rat_str(const Rational& q) {
  return q.get_den() == 1 ? num_str(q) : num_str(q) + "/" + den_str(q);
}

inline BigInt big_pow(const BigInt& base, unsigned long e) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

inline BigInt big_pow3(unsigned long e) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), 3, e);
  return out;
}

// 3^e for signed e.
inline Rational pow3(long e) {
  if (e >= 0) return Rational(big_pow3(static_cast<unsigned long>(e)));
  return Rational(1, big_pow3(static_cast<unsigned long>(-e)));
}

inline Rational rat_pow(const Rational& base, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den().get_mpz_t(), e);
  return out;  // canonical base stays canonical under powering
}

inline double log2_of(const BigInt& z) {
  if (z <= 0) throw DomainError("log2 of non-positive integer");
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp2);
}

// Base-3 log mirror; exact values may have thousands of digits, the mirror is
// for display and sorting only.
inline double log3_of(const Rational& q) {
  if (q <= 0) throw DomainError("log3 of non-positive rational");
  static const double log2_3 = std::log2(3.0);
  return (log2_of(q.get_num()) - log2_of(q.get_den())) / log2_3;
}

inline double to_double(const Rational& q) { return q.get_d(); }

// Largest k with 3^k <= q (q > 0), exact.
inline long floor_log3(const Rational& q) {
  if (q <= 0) throw DomainError("floor_log3 of non-positive rational");
  long k = static_cast<long>(std::floor(log3_of(q)));
  // settle float error exactly
  while (pow3(k + 1) <= q) ++k;
  while (pow3(k) > q) --k;
  return k;
}

// Smallest k with 3^k >= q (q > 0), exact.
inline long ceil_log3(const Rational& q) {
  long k = floor_log3(q);
  return pow3(k) == q ? k : k + 1;
}

struct RatInterval {
  Rational lo, hi;  // lo <= true value <= hi
  RatInterval() = default;
  RatInterval(Rational v) : lo(v), hi(std::move(v)) {}
  RatInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw DomainError("inverted interval");
  }
  bool exact() const { return lo == hi; }
  RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }
  RatInterval operator-(const RatInterval& o) const { return {lo - o.hi, hi - o.lo}; }
  friend RatInterval abs(const RatInterval& v) {
    if (v.lo >= 0) return v;
    if (v.hi <= 0) return {-v.hi, -v.lo};
    Rational m = -v.lo > v.hi ? -v.lo : v.hi;
    return {Rational(0), m};
  }
  // certain comparisons: true only if they hold for every represented value
  bool certainly_le(const RatInterval& o) const { return hi <= o.lo; }
  bool certainly_gt(const RatInterval& o) const { return lo > o.hi; }
};

// Directed-rounding bracket of sqrt(q), q >= 0. Width <= 1/den(q).
inline RatInterval sqrt_bracket(const Rational& q) {
  if (q < 0) throw DomainError("sqrt of negative rational");
  BigInt pq = q.get_num() * q.get_den();
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), pq.get_mpz_t());
  Rational lo(root, q.get_den());
  lo.canonicalize();
  if (root * root == pq) return {lo, lo};
  Rational hi(root + 1, q.get_den());
  hi.canonicalize();
  return {lo, hi};
}

// Rational lower bound of exp(-t) for t >= 0: integer part through an upper
// bound of e, fractional part through a truncated Taylor upper bound of e^x.
inline Rational exp_neg_lower_bound(const Rational& t) {
  if (t < 0) throw DomainError("exp_neg_lower_bound needs t >= 0");
  static const Rational e_upper("2718281828459045236/1000000000000000000");
  BigInt int_part = t.get_num() / t.get_den();  // floor, t >= 0
  Rational frac = t - Rational(int_part);
  // e^frac <= sum_{i<=m} frac^i/i! + 2 frac^{m+1}/(m+1)!  for frac in [0,1)
  const unsigned m = 24;
  Rational term(1), upper(1);
  for (unsigned i = 1; i <= m; ++i) {
    term *= frac;
    term /= static_cast<unsigned long>(i);
    upper += term;
  }
  term *= frac;
  term /= static_cast<unsigned long>(m + 1);
  upper += 2 * term;
  if (!int_part.fits_ulong_p()) throw DomainError("exponent too large");
  Rational e_t = rat_pow(e_upper, int_part.get_ui()) * upper;
  return 1 / e_t;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace qslab
