#include "qslab/embedding.hpp"

namespace qslab {

Embedding::Embedding(const CantorSystem& cantor, const IndexSet& J, const CarlesonSeries& series)
    : cantor_(cantor), J_(J), series_(series) {
  uint32_t N = cantor_.depth();
  if (series_.ladder().gens() != N)
    throw ConfigError("series ladder depth does not match the interval system");
  left_mass_.resize(N + 1);
  left_theta_.resize(N + 1);
  for (uint32_t k = 0; k <= N; ++k) {
    uint32_t lvl = series_.ladder().levels[k];
    left_theta_[k] = theta_value(theta_leftmost(lvl, J_), J_.alpha());
    left_mass_[k] = left_theta_[k] * pow3(-static_cast<long>(lvl));
  }
}

GValue Embedding::g_zero(const std::vector<BigInt>& path, uint32_t terms) const {
  uint32_t N = depth();
  if (terms > N) throw DomainError("truncation deeper than the construction");
  if (path.size() < terms) throw DomainError("path shallower than the truncation");
  GValue out{Rational(0), Rational(0)};
  Rational prev = cantor_.parent_mid(path, 0);
  for (uint32_t k = 0; k < terms; ++k) {
    Rational next = cantor_.parent_mid(path, k + 1);
    out.value += left_theta_[k] * (next - prev);
    prev = next;
  }
  for (uint32_t k = terms; k < N; ++k) out.tail += left_mass_[k];
  return out;
}

GValue Embedding::g(const Rational& x, const std::vector<BigInt>& path, uint32_t terms) const {
  uint32_t N = depth();
  GValue out = g_zero(path, terms);
  Rational prev = cantor_.parent_mid(path, 0);
  for (uint32_t k = 0; k < terms; ++k) {
    Rational next = cantor_.parent_mid(path, k + 1);
    // (y_{k+1} - y_k) / r_k * integral_0^x Delta_k dmu
    out.value += (next - prev) / cantor_.level(k).r * series_.integral(k, x);
    prev = next;
  }
  // dropped terms: |y_{k+1}-y_k|/r_k <= 1 against the absolute integrals
  for (uint32_t k = terms; k < N; ++k) out.tail += series_.abs_integral(k, x);
  return out;
}

std::vector<Rational> Embedding::F(const EmbedPoint& p) const {
  std::vector<Rational> out;
  out.reserve(p.paths.size() + 1);
  out.push_back(f(p.x));
  for (const auto& path : p.paths) out.push_back(g_full(p.x, path).value);
  return out;
}

Rational Embedding::F_sq_dist(const EmbedPoint& p, const EmbedPoint& q) const {
  std::vector<Rational> fp = F(p), fq = F(q);
  if (fp.size() != fq.size()) throw DomainError("point dimensions differ");
  Rational s = 0;
  for (size_t i = 0; i < fp.size(); ++i) {
    Rational d = fp[i] - fq[i];
    s += d * d;
  }
  return s;
}

BoundsReport Embedding::bounds(const Rational& x1, const std::vector<BigInt>& x2,
                               const Rational& b1, const std::vector<BigInt>& b2) const {
  uint32_t N = depth();
  if (x2.size() != N || b2.size() != N) throw DomainError("paths must have full depth");
  BoundsReport rep;
  uint32_t n = 0;
  while (n < N && x2[n] == b2[n]) ++n;
  if (n == N) throw DomainError("identical paths have no splitting level");
  rep.split = n;

  Rational gx = g_full(x1, x2).value;
  Rational gmid = g_full(x1, b2).value;
  Rational gb = g_full(b1, b2).value;
  rep.d_vert = abs(gx - gmid);
  rep.d_full = abs(gx - gb);

  rep.y_diff = abs(cantor_.parent_mid(x2, n + 1) - cantor_.parent_mid(b2, n + 1));
  const auto& ladder = series_.ladder();
  TernaryAddress In = address_of(x1, ladder.levels[n]);
  rep.theta_n = theta_value(theta_of(In, J_), J_.alpha());
  rep.theta_n_right = theta_value(theta_of(In.right_neighbor(), J_), J_.alpha());
  rep.mu_next = mass_value(mu_cell(address_of(x1, ladder.levels[n + 1]), J_), J_.alpha());
  rep.main_term = rep.y_diff * rep.theta_n;
  rep.main_term_min = rep.y_diff * (rep.theta_n < rep.theta_n_right ? rep.theta_n : rep.theta_n_right);
  rep.deep_mass = 0;
  for (uint32_t k = n + 1; k < N; ++k)
    rep.deep_mass += mass_value(mu_cell(address_of(x1, ladder.levels[k]), J_), J_.alpha());

  Rational D = (1 + 2 * J_.alpha()) / (1 - J_.alpha());
  rep.upper_bound = D * (rep.main_term + rep.deep_mass);
  rep.lower_bound = rep.main_term_min - D * rep.deep_mass;
  rep.upper_ok = rep.d_vert <= rep.upper_bound;
  rep.lower_ok = rep.d_vert >= rep.lower_bound;

  rep.gap_next = cantor_.level(n + 1).gap;
  rep.gap_term = Rational(3, 4) * rep.gap_next;

  Rational dx = x1 - b1;
  Rational dy = cantor_.mid_of(x2) - cantor_.mid_of(b2);
  rep.dist = sqrt_bracket(dx * dx + dy * dy);
  rep.mu_ball = mu_interval_enclosure(x1, rep.dist, J_, grid());
  rep.mu_horiz = mu_interval(x1 <= b1 ? x1 : b1, x1 <= b1 ? b1 : x1, J_, grid());
  rep.f_diff = abs(f(x1) - f(b1));
  rep.two_sided_upper = rep.upper_bound + series_.C() * rep.mu_horiz;
  rep.full_upper_ok = rep.d_full <= rep.two_sided_upper;
  return rep;
}

std::pair<Rational, Rational> Embedding::lipschitz_pair(const Rational& x, const Rational& xp,
                                                        const std::vector<BigInt>& path) const {
  Rational lo = x <= xp ? x : xp, hi = x <= xp ? xp : x;
  Rational diff = abs(g_full(x, path).value - g_full(xp, path).value);
  Rational bound = series_.C() * mu_interval(lo, hi, J_, grid());
  return {diff, bound};
}

}  // namespace qslab
