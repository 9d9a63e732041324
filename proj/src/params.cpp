#include "qslab/params.hpp"

#include <sstream>

namespace qslab {

std::vector<uint64_t> canonical_exponents(uint32_t m_s, uint32_t depth) {
  std::vector<uint64_t> e(depth + 1);
  e[0] = 0;
  for (uint32_t n = 1; n <= depth; ++n) e[n] = uint64_t(1) << (n + m_s);
  return e;
}

Derived derive(const Params& p) {
  if (p.s.p == 0 || Rational(p.s.value()) >= 1)
    throw ConfigError("s must lie in (0,1)");
  if (p.alpha < 0 || p.alpha >= 1)
    throw ConfigError("alpha must lie in [0,1)");
  if (p.exponents.empty() || p.exponents[0] != 0)
    throw ConfigError("scale exponents must start at e_0 = 0");
  if (p.depth + 1 != p.exponents.size())
    throw ConfigError("depth does not match scale list");

  Derived d;
  d.levels.resize(p.depth + 1);
  d.levels[0] = {BigInt(1), Rational(1), Rational(0), Rational(1)};
  for (uint32_t n = 1; n <= p.depth; ++n) {
    uint64_t e_prev = p.exponents[n - 1], e_cur = p.exponents[n];
    if (e_cur <= e_prev) throw ConfigError("scale exponents must increase");
    // m_n = 3^{(e_n - e_{n-1}) s}; the exponent must clear the dyadic denominator
    BigInt num = BigInt(e_cur - e_prev) * BigInt(p.s.p);
    BigInt den = big_pow(2, p.s.m);
    if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) {
      std::ostringstream os;
      os << "branching count at level " << n << " is not an integer: 3^(" << num << "/" << den << ")";
      throw ConfigError(os.str());
    }
    BigInt t = num / den;
    if (t < 1) throw ConfigError("branching count below 2 at level " + std::to_string(n));
    ScaleLevel lvl;
    lvl.m = big_pow3(t.get_ui());
    lvl.r = pow3(-static_cast<long>(e_cur));
    // flush packing: children share the parent evenly, first and last flush
    lvl.gap = (d.levels[n - 1].r - lvl.m * lvl.r) / (lvl.m - 1);
    lvl.stride = lvl.r + lvl.gap;
    if (lvl.gap <= 0) throw ConfigError("non-positive gap at level " + std::to_string(n));
    d.levels[n] = lvl;
  }
  d.D = (1 + 2 * p.alpha) / (1 - p.alpha);
  d.tau = (1 + 2 * p.alpha) / 3;
  d.c_inf = d.D + 1 + (d.D + 1) * d.tau / (1 - d.tau);
  d.d_prime = -log3_of(d.tau);
  return d;
}

std::vector<CheckRow> validate(const Params& p, const Derived& d) {
  std::vector<CheckRow> rows;
  auto add = [&](std::string name, CheckRow::Severity sev, bool ok, std::string detail) {
    rows.push_back({std::move(name), sev, ok, std::move(detail)});
  };

  if (p.scale_mode == ScaleMode::canonical) {
    auto want = canonical_exponents(p.s.m, p.depth);
    bool ok = want == p.exponents;
    add("canonical-exponents", CheckRow::warn, ok,
        ok ? "e_n = 2^(n+m_s)" : "exponent list differs from 2^(n+m_s)");
  }

  add("p_s-at-least-3", CheckRow::info, p.s.p >= 3,
      "p_s = " + std::to_string(p.s.p) + "; spacing margins need p_s >= 3 in general");

  for (uint32_t n = 0; n + 1 <= p.depth; ++n) {
    const auto& lvl = d.levels[n + 1];
    // strict spacing window: 3^(n+1) r_{n+1} < gap_{n+1} < r_n / 10
    Rational lower = pow3(static_cast<long>(n) + 1) * lvl.r;
    bool lo_ok = lower < lvl.gap;
    bool hi_ok = lvl.gap < d.levels[n].r / 10;
    add("spacing-lower-" + std::to_string(n + 1), CheckRow::warn, lo_ok,
        "3^" + std::to_string(n + 1) + " r = " + rat_str(lower) + " vs gap = " + rat_str(lvl.gap));
    add("spacing-upper-" + std::to_string(n + 1), CheckRow::warn, hi_ok,
        "gap = " + rat_str(lvl.gap) + " vs r/10 = " + rat_str(d.levels[n].r / 10));
    bool ratio_ok = lvl.r < d.levels[n].r / 30;
    add("scale-ratio-" + std::to_string(n + 1), CheckRow::warn, ratio_ok,
        "r_{n+1} < r_n/30 keeps increment geometry summable");
    // mass identity: prod_{k<=n+1} m_k = 3^{s e_{n+1}} exactly
    BigInt prod = 1;
    for (uint32_t k = 1; k <= n + 1; ++k) prod *= d.levels[k].m;
    BigInt se = BigInt(p.exponents[n + 1]) * BigInt(p.s.p) / big_pow(2, p.s.m);
    bool mass_ok = prod == big_pow3(se.get_ui());
    add("mass-identity-" + std::to_string(n + 1), CheckRow::error, mass_ok,
        "prod m_k must equal 3^(s e_n)");
  }

  {
    // flat-top advisory: D D' 3^(-D' n_alpha) < 1/29
    double lhs = to_double(d.D) * d.d_prime * std::pow(3.0, -d.d_prime * p.n_alpha);
    add("n_alpha-advisory", CheckRow::info, lhs < 1.0 / 29.0,
        "D D' 3^(-D' n_alpha) = " + std::to_string(lhs));
  }
  return rows;
}

namespace {

// sign of (1-a)^(u1/q) (1+2a)^(u2/q) - 3^-N, decided exactly by raising to
// the q-th power: (1-a)^u1 (1+2a)^u2 3^(N q) vs 1.
int pipeline_sign(const Rational& a, unsigned long u1, unsigned long u2, unsigned long Nq) {
  Rational lhs = rat_pow(1 - a, u1) * rat_pow(1 + 2 * a, u2) * Rational(big_pow3(Nq));
  return cmp(lhs, Rational(1));
}

}  // namespace

Pipeline derive_pipeline(uint32_t dims, Dyadic s, const Rational& epsilon, uint32_t bits) {
  if (dims < 2) throw ConfigError("pipeline needs d >= 2");
  if (epsilon <= 0 || epsilon >= 1) throw ConfigError("epsilon must lie in (0,1)");
  Pipeline out;
  out.bits = bits;
  Rational sv = s.value();

  Rational target = 1 + (dims - 1) * sv;
  uint32_t M = 1;
  while (!((1 + Rational(M)) * epsilon > target)) ++M;
  out.M = M;

  Rational half_gap = (1 - sv) / 2;
  uint32_t N = 1;
  while (!(Rational(N) * half_gap >= M)) ++N;
  out.N = N;

  out.sigma = (1 - sv) / 4;

  // exponents 2/3 - sigma and 1/3 + sigma over the common denominator q
  Rational a1 = Rational(2, 3) - out.sigma;
  Rational a2 = Rational(1, 3) + out.sigma;
  BigInt q = lcm(a1.get_den(), a2.get_den());
  BigInt u1 = a1.get_num() * (q / a1.get_den());
  BigInt u2 = a2.get_num() * (q / a2.get_den());
  unsigned long uq = q.get_ui();
  unsigned long Nq = static_cast<unsigned long>(out.N) * uq;

  Rational lo = 0, hi = 1;
  // sign at 0 is +, at 1 is -; keep the bracket and bisect on dyadics
  for (uint32_t i = 0; i < bits; ++i) {
    Rational mid = (lo + hi) / 2;
    int sgn = pipeline_sign(mid, u1.get_ui(), u2.get_ui(), Nq);
    if (sgn == 0) {
      lo = hi = mid;
      break;
    }
    (sgn > 0 ? lo : hi) = mid;
  }
  out.alpha = lo;
  out.residual_lo = lo;
  out.residual_hi = hi;
  return out;
}

}  // namespace qslab
