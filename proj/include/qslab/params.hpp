#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qslab/rational.hpp"

namespace qslab {

// dyadic rational p / 2^m in (0,1)
struct Dyadic {
  uint64_t p = 1;
  uint32_t m = 1;
  Rational value() const { return Rational(BigInt(p), big_pow(2, m)); }
};

enum class ScaleMode { canonical, custom };

struct Params {
  Dyadic s;                          // similarity exponent
  Rational alpha = Rational(1, 2);   // density oscillation amplitude, in [0,1)
  ScaleMode scale_mode = ScaleMode::canonical;
  std::vector<uint64_t> exponents;   // e_0 = 0 < e_1 < ... <= max ternary depth
  uint32_t n_alpha = 0;              // flat-top index: scales >= r_{n_alpha} carry no density factors
  uint32_t dims = 2;                 // ambient dimension d
  uint32_t depth = 0;                // ladder depth N (index of deepest scale)

  uint32_t cover_M = 0;              // covering exponent M (0 = not set)
  Rational epsilon = Rational(1, 2); // covering Holder exponent

  uint32_t depth_of(uint32_t n) const { return static_cast<uint32_t>(exponents.at(n)); }
};

struct ScaleLevel {
  BigInt m;         // children per parent (m_0 = 1 for the root)
  Rational r;       // interval length 3^-e_n
  Rational gap;     // gap between siblings (undefined at level 0 -> 0)
  Rational stride;  // r + gap
};

struct Derived {
  std::vector<ScaleLevel> levels;  // 0..depth
  Rational D;      // adjacent-cell density ratio bound (1+2a)/(1-a)
  Rational tau;    // max child/parent mass ratio (1+2a)/3
  Rational c_inf;  // analytic Carleson constant D + 1 + (D+1) tau/(1-tau)
  double d_prime;  // -log3 tau
};

struct CheckRow {
  enum Severity { info, warn, error };
  std::string name;
  Severity severity = info;
  bool passed = true;
  std::string detail;
};

// Scale ladder from the defining equation m_{n+1} = (r_n / r_{n+1})^s.
// Throws ConfigError when m is non-integral or < 2, or alpha is out of range.
Derived derive(const Params& p);

// Inequality checks. Failures downgrade guarantees but never abort; hard
// failures are already screened by derive().
std::vector<CheckRow> validate(const Params& p, const Derived& d);

std::vector<uint64_t> canonical_exponents(uint32_t m_s, uint32_t depth);

struct Pipeline {
  uint32_t M = 0;
  uint32_t N = 0;
  Rational sigma;
  Rational alpha;          // dyadic bisection output
  Rational residual_lo;    // bracket ends of the defining equation at output precision
  Rational residual_hi;
  uint32_t bits = 64;      // alpha denominator 2^bits
};

// Derives (M, N, sigma, alpha) from (d, s, epsilon):
//   M  smallest positive integer with (1+M) epsilon > 1 + (d-1) s
//   N  smallest integer with N (1-s)/2 >= M
//   sigma = (1-s)/4
//   alpha the root of (1-a)^(2/3-sigma) (1+2a)^(1/3+sigma) = 3^-N
// Bisection compares exactly after clearing the fractional exponents.
Pipeline derive_pipeline(uint32_t dims, Dyadic s, const Rational& epsilon, uint32_t bits = 64);

}  // namespace qslab
