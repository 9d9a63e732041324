#include "qslab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qslab {

namespace {

BigInt random_index(Rng& rng, uint32_t level) {
  BigInt v = 0;
  for (uint32_t i = 0; i < level; ++i) v = v * 3 + rng.below(3);
  return v;
}

Rational grid_point(Rng& rng, uint32_t grid) {
  Rational out(random_index(rng, grid), big_pow3(grid));
  out.canonicalize();
  return out;
}

std::vector<BigInt> random_path(Rng& rng, const CantorSystem& cantor) {
  std::vector<BigInt> path;
  path.reserve(cantor.depth());
  for (uint32_t k = 1; k <= cantor.depth(); ++k) {
    const BigInt& m = cantor.level(k).m;
    if (!m.fits_ulong_p()) throw BudgetError("branching too wide to sample");
    path.emplace_back(rng.below(m.get_ui()));
  }
  return path;
}

EmbedPoint random_point(Rng& rng, const Embedding& emb, uint32_t coords) {
  EmbedPoint p;
  p.x = grid_point(rng, emb.grid());
  for (uint32_t c = 0; c < coords; ++c) p.paths.push_back(random_path(rng, emb.cantor()));
  return p;
}

// squared Euclidean distance in the domain [0,1] x E^(d-1)
Rational domain_sq(const Embedding& emb, const EmbedPoint& p, const EmbedPoint& q) {
  Rational dx = p.x - q.x;
  Rational out = dx * dx;
  for (size_t c = 0; c < p.paths.size(); ++c) {
    Rational dy = emb.cantor().mid_of(p.paths[c]) - emb.cantor().mid_of(q.paths[c]);
    out += dy * dy;
  }
  return out;
}

std::string point_text(const EmbedPoint& p) {
  std::ostringstream os;
  os << "(" << rat_str(p.x);
  for (const auto& path : p.paths) {
    os << "; ";
    for (size_t i = 0; i < path.size(); ++i) os << (i ? "," : "") << path[i].get_str();
  }
  os << ")";
  return os.str();
}

std::string cell_text(const TernaryAddress& a) { return a.to_string(); }

}  // namespace

DoublingScan doubling_scan(const IndexSet& J, uint32_t max_level) {
  DoublingScan out;
  const Rational& a = J.alpha();
  out.bound = (1 + 2 * a) / (1 - a);
  out.max_ratio = 1;
  out.witness = "level 0";
  for (uint32_t lvl = 0; lvl <= max_level; ++lvl) {
    BigInt cells = big_pow3(lvl);
    for (BigInt i = 0; i < cells; ++i) {
      TernaryAddress cell = address_from_index(i, lvl);
      TernaryAddress right = cell.right_neighbor();
      Theta tl = theta_of(cell, J), tr = theta_of(right, J);
      long dons = static_cast<long>(tr.ones) - static_cast<long>(tl.ones);
      if (dons < -1 || dons > 1) out.ones_adjacent_ok = false;
      Rational ratio = theta_value(tr, a) / theta_value(tl, a);
      if (ratio < 1) ratio = 1 / ratio;
      if (ratio > out.max_ratio) {
        out.max_ratio = ratio;
        out.witness = cell_text(cell);
      }
    }
  }
  out.passed = out.ones_adjacent_ok && out.max_ratio <= out.bound;
  return out;
}

MeasureAxioms measure_axioms_check(const IndexSet& J, uint32_t max_level, uint32_t chain_depth,
                                   uint64_t chains, uint64_t seed) {
  MeasureAxioms out;
  const Rational& a = J.alpha();
  out.total_ok = true;
  out.additive_ok = true;
  for (uint32_t lvl = 0; lvl <= max_level && out.total_ok; ++lvl) {
    Rational total = 0;
    BigInt cells = big_pow3(lvl);
    for (BigInt i = 0; i < cells; ++i)
      total += mass_value(mu_cell(address_from_index(i, lvl), J), a);
    if (total != 1) {
      out.total_ok = false;
      out.witness = "level " + std::to_string(lvl) + " total " + rat_str(total);
    }
  }
  for (uint32_t lvl = 0; lvl + 1 <= max_level && out.additive_ok; ++lvl) {
    BigInt cells = big_pow3(lvl);
    for (BigInt i = 0; i < cells && out.additive_ok; ++i) {
      TernaryAddress parent = address_from_index(i, lvl);
      Rational sum = 0;
      for (unsigned d = 0; d < 3; ++d) {
        TernaryAddress child = parent;
        child.append(d);
        sum += mass_value(mu_cell(child, J), a);
      }
      if (sum != mass_value(mu_cell(parent, J), a)) {
        out.additive_ok = false;
        out.witness = "split at " + cell_text(parent);
      }
    }
  }
  out.chains_ok = true;
  for (uint64_t c = 0; c < chains; ++c) {
    Rng rng(seed, 3, c);
    TernaryAddress leaf = address_from_index(random_index(rng, chain_depth), chain_depth);
    uint32_t lvl = static_cast<uint32_t>(rng.below(chain_depth));
    TernaryAddress parent = leaf.prefix(lvl);
    Rational sum = 0;
    for (unsigned d = 0; d < 3; ++d) {
      TernaryAddress child = parent;
      child.append(d);
      sum += mass_value(mu_cell(child, J), a);
    }
    ++out.chain_checks;
    if (sum != mass_value(mu_cell(parent, J), a)) {
      out.chains_ok = false;
      out.witness = "chain split at " + cell_text(parent);
      break;
    }
  }
  out.passed = out.total_ok && out.additive_ok && out.chains_ok;
  return out;
}

G0Check g0_check(const Params& p, const IndexSet& J, uint64_t samples, uint64_t seed) {
  G0Check out;
  BigInt cut = big_pow(2, p.n_alpha + p.s.m);  // members sit strictly above this position
  if (!cut.fits_ulong_p()) throw BudgetError("member cut too deep to scan");
  uint32_t grid = p.depth_of(p.depth);
  uint32_t exact_top = static_cast<uint32_t>(std::min<unsigned long>(cut.get_ui() + 1, grid));
  exact_top = std::min<uint32_t>(exact_top, 8);
  out.exact_levels = exact_top;
  out.passed = true;
  // ternary cells down to one level below the cut carry no member digits
  for (uint32_t lvl = 0; lvl <= exact_top && lvl <= 8; ++lvl) {
    BigInt cells = big_pow3(lvl);
    for (BigInt i = 0; i < cells; ++i) {
      TernaryAddress cell = address_from_index(i, lvl);
      if (mass_value(mu_cell(cell, J), J.alpha()) != pow3(-static_cast<long>(lvl))) {
        out.passed = false;
        ++out.violations;
        out.witness = "ternary " + cell_text(cell);
      }
    }
  }
  // arbitrary grid intervals no shorter than 3^-cut: length/3 <= mass <= 2 length
  uint32_t cut_lvl = static_cast<uint32_t>(cut.get_ui());
  if (cut_lvl <= grid) {
    BigInt period = big_pow3(grid);
    BigInt min_cells = big_pow3(grid - cut_lvl);
    for (uint64_t i = 0; i < samples; ++i) {
      Rng rng(seed, 4, i);
      BigInt lo = random_index(rng, grid);
      BigInt span = min_cells + random_index(rng, grid - cut_lvl);  // in [min, 2 min)
      Rational a(lo, period), b(lo + span, period);
      a.canonicalize();
      b.canonicalize();
      Rational mass = mu_interval(a, b, J, grid);
      Rational len(span, period);
      len.canonicalize();
      ++out.sampled;
      if (3 * mass < len || mass > 2 * len) {
        out.passed = false;
        ++out.violations;
        out.witness = "interval [" + rat_str(a) + ", " + rat_str(b) + ")";
      }
    }
  }
  return out;
}

G1Check g1_check(const Params& p, const Derived& d, const IndexSet& J, uint64_t samples,
                 uint64_t seed) {
  G1Check out;
  out.passed = true;
  const Rational& alpha = J.alpha();
  Rational D = (1 + 2 * alpha) / (1 - alpha);
  // pinned comparability factors for non-ternary windows, from the covering
  // argument: <= 4 window cells above, one window cell shrunk by at most two
  // extra digit factors below
  Rational upper_factor = 7 * D;
  Rational lower_factor = (1 - alpha) * (1 - alpha) / (54 * D);
  uint32_t grid = p.depth_of(p.depth);
  bool first = true;
  for (uint32_t n = 1; n <= p.depth; ++n) {
    uint32_t base = p.depth_of(n - 1);
    long deep = floor_log3(1 / d.levels[n].gap);  // |J| >= gap_n <=> level <= this
    if (deep < static_cast<long>(base)) continue;
    uint32_t top = static_cast<uint32_t>(deep);
    // ternary route: identical exponent pairs across the whole closed window
    for (uint64_t i = 0; i < samples; ++i) {
      Rng rng(seed, 5, (static_cast<uint64_t>(n) << 32) | i);
      uint32_t lvl = base + static_cast<uint32_t>(rng.below(top - base + 1));
      TernaryAddress cell = address_from_index(random_index(rng, lvl), lvl);
      Theta tc = theta_of(cell, J);
      Theta tb = theta_of(cell.prefix(base), J);
      ++out.ternary_pairs;
      if (tc.ones != tb.ones || tc.count != tb.count) {
        out.passed = false;
        ++out.violations;
        out.witness = "ternary " + cell_text(cell);
      }
    }
    // interval route: arbitrary grid subintervals of the tripled cell
    if (grid < top) continue;
    for (uint64_t i = 0; i < samples; ++i) {
      Rng rng(seed, 6, (static_cast<uint64_t>(n) << 32) | i);
      TernaryAddress base_cell = address_from_index(random_index(rng, base), base);
      Rational theta_base = theta_value(theta_of(base_cell, J), alpha);
      Rational r_base = d.levels[n - 1].r;
      BigInt r_cells = big_pow3(grid - base);
      // length between gap_n and r_(n-1), snapped up to the grid
      Rational len = d.levels[n].gap +
                     Rational(random_index(rng, grid - base), big_pow3(grid));
      if (len > r_base) len = r_base;
      BigInt len_cells;
      mpz_cdiv_q(len_cells.get_mpz_t(), BigInt(len.get_num() * big_pow3(grid)).get_mpz_t(),
                 len.get_den().get_mpz_t());
      // left endpoint anywhere keeping the interval inside the tripled cell
      BigInt slack = 3 * r_cells - len_cells;
      BigInt off = random_index(rng, grid) % (slack + 1);
      Rational a = base_cell.left() - r_base + Rational(off, big_pow3(grid));
      a.canonicalize();
      if (a < 0) a += 1;  // the mass is periodic
      Rational b = a + Rational(len_cells, big_pow3(grid));
      b.canonicalize();
      Rational mass = mu_interval(a, b, J, grid);
      Rational theta_J = mass / (b - a);
      ++out.interval_pairs;
      Rational ratio = theta_J / theta_base;
      if (first || ratio > out.max_ratio) out.max_ratio = ratio;
      if (first || ratio < out.min_ratio) out.min_ratio = ratio;
      first = false;
      if (theta_J > upper_factor * theta_base || theta_J < lower_factor * theta_base) {
        out.passed = false;
        ++out.violations;
        out.witness = "interval [" + rat_str(a) + ", " + rat_str(b) + ")";
      }
    }
  }
  return out;
}

LipschitzCheck lipschitz_check(const Embedding& emb, uint64_t pairs, uint64_t seed) {
  LipschitzCheck out;
  out.passed = true;
  uint32_t grid = emb.grid();
  BigInt period = big_pow3(grid);
  const auto& members = emb.index_set().members();
  for (uint64_t i = 0; i < pairs; ++i) {
    Rng rng(seed, 7, i);
    std::vector<BigInt> path = random_path(rng, emb.cantor());
    Rational x, xp;
    switch (i % 4) {
      case 0: {  // independent uniform
        x = grid_point(rng, grid);
        xp = grid_point(rng, grid);
        break;
      }
      case 1: {  // adjacent leaves
        BigInt lo = random_index(rng, grid);
        if (lo + 1 == period) lo -= 1;
        x = Rational(lo, period);
        xp = Rational(lo + 1, period);
        break;
      }
      case 2: {  // straddle a member-scale cell boundary
        uint32_t j = members.empty()
                         ? grid
                         : members[static_cast<size_t>(rng.below(members.size()))];
        BigInt c = 1 + random_index(rng, j) % (big_pow3(j) - 1);
        Rational edge(c, big_pow3(j));
        x = edge - Rational(1, period);
        xp = edge + Rational(1, period);
        break;
      }
      default: {  // within one generation cell
        uint32_t lvl = emb.series().ladder().levels[rng.below(emb.depth()) + 1];
        BigInt cell = random_index(rng, lvl);
        BigInt span = big_pow3(grid - lvl);
        x = Rational(cell * span + random_index(rng, grid - lvl), period);
        xp = Rational(cell * span + random_index(rng, grid - lvl), period);
        break;
      }
    }
    x.canonicalize();
    xp.canonicalize();
    auto [diff, bound] = emb.lipschitz_pair(x, xp, path);
    ++out.pairs;
    if (diff > bound) {
      out.passed = false;
      ++out.violations;
      out.witness = "x=" + rat_str(x) + " x'=" + rat_str(xp);
    } else if (bound > 0 && diff / bound > out.max_ratio) {
      out.max_ratio = diff / bound;
    }
  }
  return out;
}

namespace {

std::vector<BigInt> perturbed_path(Rng& rng, const CantorSystem& cantor,
                                   const std::vector<BigInt>& base, uint32_t lvl, bool far) {
  std::vector<BigInt> path = base;
  const BigInt& m = cantor.level(lvl).m;
  BigInt cur = path[lvl - 1];
  if (far) {
    path[lvl - 1] = 2 * cur < m ? BigInt(m - 1) : BigInt(0);
  } else {
    path[lvl - 1] = cur + 1 < m ? BigInt(cur + 1) : BigInt(cur - 1);
  }
  if (path[lvl - 1] == cur) path[lvl - 1] = cur == 0 ? BigInt(1) : BigInt(0);
  (void)rng;
  return path;
}

}  // namespace

PairBoundsCheck pair_bounds_check(const Embedding& emb, uint64_t pairs, uint64_t seed,
                                  Rational rho) {
  PairBoundsCheck out;
  out.passed = true;
  const Rational& alpha = emb.index_set().alpha();
  Rational D = (1 + 2 * alpha) / (1 - alpha);
  const Rational& C = emb.series().C();
  uint32_t dims = 2;  // coordinate pairs are checked one at a time
  if (rho == 0) rho = 1 / (4 * dims * C * D * D * D);
  out.rho = rho;
  uint32_t N = emb.depth();
  uint32_t coords = 1;
  Rational c_emp_sq(0);
  for (uint64_t i = 0; i < pairs; ++i) {
    Rng rng(seed, 8, i);
    EmbedPoint x = random_point(rng, emb, coords);
    EmbedPoint b = x;
    uint32_t stratum = i % 5;
    switch (stratum) {
      case 0:
        b = random_point(rng, emb, coords);
        if (b.paths[0] == x.paths[0])
          b.paths[0] = perturbed_path(rng, emb.cantor(), x.paths[0], N, false);
        break;
      case 1:  // adjacent leaves of E, same abscissa
        b.paths[0] = perturbed_path(rng, emb.cantor(), x.paths[0], N, false);
        break;
      case 2:  // far split at the top scale
        b.x = grid_point(rng, emb.grid());
        b.paths[0] = perturbed_path(rng, emb.cantor(), x.paths[0], 1, true);
        break;
      case 3:  // one-cell horizontal offset, deepest vertical split
        b.x = x.x + Rational(1, big_pow3(emb.grid()));
        b.paths[0] = perturbed_path(rng, emb.cantor(), x.paths[0], N, false);
        break;
      default: {  // gap straddlers at a rotating level
        uint32_t lvl = 1 + static_cast<uint32_t>(i % N);
        b.paths[0] = perturbed_path(rng, emb.cantor(), x.paths[0], lvl, false);
        break;
      }
    }
    ++out.pairs;
    BoundsReport rep = emb.bounds(x.x, x.paths[0], b.x, b.paths[0]);
    if (!rep.upper_ok) {
      ++out.vertical_upper_viol;
      out.witness = "upper " + point_text(x) + " vs " + point_text(b);
    }
    if (!rep.lower_ok) {
      ++out.vertical_lower_viol;
      out.witness = "lower " + point_text(x) + " vs " + point_text(b);
    }
    if (!rep.full_upper_ok) {
      ++out.full_upper_viol;
      out.witness = "full " + point_text(x) + " vs " + point_text(b);
    }
    // lower estimate on the nearly-vertical stratum
    Rational dom = domain_sq(emb, x, b);
    Rational dx1 = x.x - b.x;
    if (dx1 * dx1 <= rho * rho * dom) {
      ++out.lower_stratum;
      Rational floor_expr = rep.main_term_min - D * rep.deep_mass - C * rep.mu_horiz;
      if (floor_expr > 0) ++out.lower_active;
      if (rep.d_full < floor_expr) {
        ++out.lower_viol;
        out.witness = "stratum " + point_text(x) + " vs " + point_text(b);
      }
    }
    // observed diameter comparability against the mu-ball
    if (rep.mu_ball.lo > 0) {
      Rational full_sq = emb.F_sq_dist(x, b);
      Rational cand = full_sq / (rep.mu_ball.lo * rep.mu_ball.lo);
      if (cand > c_emp_sq) c_emp_sq = cand;
    }
  }
  out.c_emp = sqrt_bracket(c_emp_sq).hi;
  out.passed = out.vertical_upper_viol == 0 && out.vertical_lower_viol == 0 &&
               out.full_upper_viol == 0 && out.lower_viol == 0;
  return out;
}

IdentityCheck identity_check(const Embedding& emb, uint64_t points, uint64_t seed) {
  IdentityCheck out;
  out.f_identity = true;
  out.F_identity = true;
  out.tails_zero = true;
  for (uint64_t i = 0; i < points; ++i) {
    Rng rng(seed, 9, i);
    Rational t = i == 0 ? Rational(0) : (i == 1 ? Rational(1) : grid_point(rng, emb.grid()));
    if (emb.f(t) != t) {
      out.f_identity = false;
      out.witness = "f at " + rat_str(t);
    }
    EmbedPoint p = random_point(rng, emb, 1);
    GValue g = emb.g_full(p.x, p.paths[0]);
    if (g.tail != 0) {
      out.tails_zero = false;
      out.witness = "tail at " + point_text(p);
    }
    if (g.value != emb.cantor().mid_of(p.paths[0])) {
      out.F_identity = false;
      out.witness = "g at " + point_text(p);
    }
    ++out.points;
  }
  out.passed = out.f_identity && out.F_identity && out.tails_zero;
  return out;
}

namespace {

void consider_triple(const Embedding& emb, const EmbedPoint& x, const EmbedPoint& a,
                     const EmbedPoint& b, QSReport& rep) {
  ++rep.requested;
  Rational dbx = domain_sq(emb, b, x);
  Rational dax = domain_sq(emb, a, x);
  if (dbx == 0 || dax == 0) {
    ++rep.degenerate;
    return;
  }
  if (dax > dbx) return;  // outside the weak-quasisymmetry hypothesis
  Rational fb = emb.F_sq_dist(b, x);
  if (fb == 0) {
    ++rep.collisions;
    return;
  }
  Rational fa = emb.F_sq_dist(a, x);
  Rational ratio = fa / fb;
  ++rep.kept;
  Rational in = dax / dbx;
  // octave profile over the input ratio: bin i holds inputs in (4^-(i+1), 4^-i]
  size_t bin = 8;
  Rational cut(1);
  for (size_t i = 0; i < 8; ++i) {
    Rational next = cut / 4;
    if (in <= cut && in > next) {
      bin = i;
      break;
    }
    cut = next;
  }
  double r = std::sqrt(to_double(ratio));
  if (r > rep.profile[bin]) rep.profile[bin] = r;
  if (!rep.worst || ratio > rep.max_ratio_sq) {
    rep.max_ratio_sq = ratio;
    rep.max_ratio = r;
    rep.worst = QSWitness{x, a, b, in, ratio,
                          point_text(x) + " a=" + point_text(a) + " b=" + point_text(b)};
  }
  if (rep.bound_sq && ratio > *rep.bound_sq) {
    ++rep.violations;
    if (rep.violating.size() < 8)
      rep.violating.push_back(QSWitness{x, a, b, in, ratio,
                                        point_text(x) + " a=" + point_text(a) +
                                            " b=" + point_text(b)});
  }
}

// exact squared ratio of a candidate, or nothing when the triple falls
// outside the weak-quasisymmetry hypothesis
std::optional<Rational> adversary_score(const Embedding& emb, const EmbedPoint& x,
                                        const EmbedPoint& a, const EmbedPoint& b) {
  if (x.x < 0 || x.x > 1 || a.x < 0 || a.x > 1 || b.x < 0 || b.x > 1) return std::nullopt;
  Rational dax = domain_sq(emb, a, x);
  Rational dbx = domain_sq(emb, b, x);
  if (dax == 0 || dbx == 0 || dax > dbx) return std::nullopt;
  Rational fb = emb.F_sq_dist(b, x);
  if (fb == 0) return std::nullopt;
  return emb.F_sq_dist(a, x) / fb;
}

struct AdversaryTriple {
  Rational score;
  EmbedPoint x, a, b;
};

// deterministic adversarial search, shared by every seed so the reported
// maximum rests on a reproducible floor. the extremal shape has a crossing
// a dense window horizontally while b backs off the other way with a sibling
// step; a coarse sweep over that family feeds a greedy exact climb.
void adversary_stratum(const Embedding& emb, QSReport& rep) {
  uint32_t N = emb.depth();
  uint32_t g = emb.grid();
  uint32_t la = std::min<uint32_t>(4, g);
  Rational cell(1, big_pow3(la));
  Rational unit(1, big_pow3(g));

  std::vector<std::vector<BigInt>> path_starts;
  {
    std::vector<BigInt> ones, highs;
    for (uint32_t k = 1; k <= N; ++k) {
      const BigInt& m = emb.cantor().level(k).m;
      ones.push_back(m > 1 ? BigInt(1) : BigInt(0));
      highs.push_back(m > 2 ? BigInt(m - 2) : BigInt(0));
    }
    path_starts.push_back(ones);
    if (highs != ones) path_starts.push_back(highs);
  }
  std::vector<Rational> mags;
  for (Rational m : {cell / 3, cell / 9})
    if (m >= unit) mags.push_back(m);
  if (mags.empty()) mags.push_back(unit);

  std::vector<AdversaryTriple> pool;
  auto offer = [&](const EmbedPoint& x, const EmbedPoint& a, const EmbedPoint& b) {
    if (auto r = adversary_score(emb, x, a, b)) pool.push_back({*r, x, a, b});
  };

  for (BigInt c(0), edge = big_pow3(la); c < edge; ++c) {
    Rational t = Rational(c) * cell;
    for (const auto& P : path_starts) {
      EmbedPoint x{t, {P}};
      for (int du : {1, -1}) {
        for (const Rational& mag : mags) {
          Rational u = Rational(du) * mag;
          EmbedPoint a{t + u, {P}};
          for (uint32_t lvl = 1; lvl <= N; ++lvl) {
            const BigInt& m = emb.cantor().level(lvl).m;
            for (int dd : {-2, -1, 1, 2}) {
              BigInt nv = P[lvl - 1] + dd;
              if (nv < 0 || nv >= m) continue;
              for (int vmul : {1, 2}) {
                EmbedPoint b{t - Rational(vmul) * u, {P}};
                b.paths[0][lvl - 1] = nv;
                offer(x, a, b);
              }
            }
          }
          for (int vmul : {1, 2, 3})
            offer(x, a, EmbedPoint{t - Rational(vmul) * u, {P}});
        }
      }
    }
  }
  std::sort(pool.begin(), pool.end(),
            [](const AdversaryTriple& l, const AdversaryTriple& r) { return l.score > r.score; });

  std::vector<long> steps;
  for (long s = 1; s <= 81; s *= 3)
    if (Rational(s) * unit <= cell) steps.push_back(s);

  size_t starts = std::min<size_t>(3, pool.size());
  for (size_t i = 0; i < starts; ++i) {
    AdversaryTriple t = pool[i];
    for (int round = 0; round < 64; ++round) {
      bool improved = false;
      for (EmbedPoint* pt : {&t.x, &t.a, &t.b}) {
        for (long s : steps) {
          for (int dir : {1, -1}) {
            AdversaryTriple u = t;
            EmbedPoint* moved = pt == &t.x ? &u.x : pt == &t.a ? &u.a : &u.b;
            moved->x += Rational(dir * s) * unit;
            if (auto r = adversary_score(emb, u.x, u.a, u.b); r && *r > t.score) {
              u.score = *r;
              t = u;
              improved = true;
            }
          }
        }
      }
      for (EmbedPoint* pt : {&t.x, &t.a, &t.b}) {
        for (uint32_t lvl = 1; lvl <= N; ++lvl) {
          const BigInt& m = emb.cantor().level(lvl).m;
          for (int dd : {-2, -1, 1, 2}) {
            AdversaryTriple u = t;
            EmbedPoint* moved = pt == &t.x ? &u.x : pt == &t.a ? &u.a : &u.b;
            BigInt nv = moved->paths[0][lvl - 1] + dd;
            if (nv < 0 || nv >= m) continue;
            moved->paths[0][lvl - 1] = nv;
            if (auto r = adversary_score(emb, u.x, u.a, u.b); r && *r > t.score) {
              u.score = *r;
              t = u;
              improved = true;
            }
          }
        }
      }
      if (!improved) break;
    }
    consider_triple(emb, t.x, t.a, t.b, rep);
  }
}

}  // namespace

QSReport sample_weak_qs(const Embedding& emb, uint64_t n, uint64_t seed,
                        std::optional<Rational> ratio_sq_bound) {
  QSReport rep;
  rep.bound_sq = std::move(ratio_sq_bound);
  uint32_t coords = 1;
  uint32_t N = emb.depth();

  // deterministic adversarial stratum, shared by every seed: splits across
  // each construction level, plus tiny horizontal offsets
  std::vector<BigInt> zero(N, BigInt(0));
  EmbedPoint base{Rational(0), {zero}};
  for (uint32_t lvl = 1; lvl <= N; ++lvl) {
    EmbedPoint a = base, b = base;
    a.paths[0][lvl - 1] = 1;
    b.paths[0][lvl - 1] = emb.cantor().level(lvl).m - 1;
    consider_triple(emb, base, a, b, rep);
  }
  {
    EmbedPoint a = base, b = base;
    a.x = Rational(1, big_pow3(emb.grid()));
    b.paths[0][N - 1] = 1;
    consider_triple(emb, base, a, b, rep);
    EmbedPoint c = base;
    c.x = Rational(1, big_pow3(emb.series().ladder().levels[1]));
    consider_triple(emb, base, a, c, rep);
  }
  adversary_stratum(emb, rep);

  for (uint64_t i = 0; i < n; ++i) {
    Rng rng(seed, 10, i);
    EmbedPoint x = random_point(rng, emb, coords);
    EmbedPoint a = random_point(rng, emb, coords);
    EmbedPoint b = random_point(rng, emb, coords);
    if (i % 3 == 1) {  // nearly-collinear stratum
      a.paths = x.paths;
    } else if (i % 3 == 2) {  // vertical stratum
      a.x = x.x;
      b.x = x.x;
    }
    consider_triple(emb, x, a, b, rep);
  }
  return rep;
}

Rational reeval_ratio_sq(const Embedding& emb, const QSWitness& w) {
  return emb.F_sq_dist(w.a, w.x) / emb.F_sq_dist(w.b, w.x);
}

namespace {

std::string fmt(const Rational& q) { return rat_str(q) + " (" + std::to_string(to_double(q)) + ")"; }

}  // namespace

SuiteReport run_suite(const SuiteInputs& in) {
  SuiteReport rep;
  if (!in.index_set) throw ConfigError("suite needs an index set");
  const IndexSet& J = *in.index_set;

  {
    DoublingScan d = doubling_scan(J, in.scan_level);
    rep.rows.push_back({"doubling-ratio", d.passed,
                        "max " + fmt(d.max_ratio) + " bound " + fmt(d.bound) + " at " + d.witness});
    rep.rows.push_back({"neighbor-ones-step", d.ones_adjacent_ok,
                        "member ones-counts of neighbors differ by at most 1"});
  }
  {
    uint32_t chain_depth = in.params ? in.params->depth_of(in.params->depth) : in.scan_level + 2;
    MeasureAxioms m = measure_axioms_check(J, in.scan_level, chain_depth, in.chains, in.seed);
    rep.rows.push_back({"measure-total", m.total_ok, "unit mass at every scanned level"});
    rep.rows.push_back(
        {"measure-additive", m.additive_ok && m.chains_ok,
         "exhaustive splits to level " + std::to_string(in.scan_level) + ", " +
             std::to_string(m.chain_checks) + " sampled chains" +
             (m.passed ? "" : "; witness " + m.witness)});
  }
  if (in.params) {
    G0Check g0 = g0_check(*in.params, J, in.samples, in.seed);
    rep.rows.push_back({"lebesgue-window", g0.passed,
                        std::to_string(g0.exact_levels) + " exact levels, " +
                            std::to_string(g0.sampled) + " interval samples" +
                            (g0.passed ? "" : "; witness " + g0.witness)});
  }
  if (in.params && in.derived) {
    G1Check g1 = g1_check(*in.params, *in.derived, J, in.samples, in.seed);
    rep.rows.push_back({"density-transfer", g1.passed,
                        std::to_string(g1.ternary_pairs) + " ternary pairs exact, " +
                            std::to_string(g1.interval_pairs) + " interval pairs in [" +
                            fmt(g1.min_ratio) + ", " + fmt(g1.max_ratio) + "]" +
                            (g1.passed ? "" : "; witness " + g1.witness)});
  }
  if (in.ladder && in.derived) {
    G2Report g2 = verify_g2(*in.ladder, J, *in.derived, in.leaf_budget, in.chains, in.seed);
    rep.rows.push_back({"carleson-ratio", g2.exhaustive_pass && g2.chain_pass,
                        "max " + fmt(g2.max_ratio) + " bound " + fmt(g2.analytic_bound) + " at " +
                            g2.witness + ", " + std::to_string(g2.chain_count) + " chains"});
  }
  if (in.series) {
    SeriesCheck s = in.series->verify(J);
    rep.rows.push_back({"series-cell-means", s.mean_ok, s.mean_ok ? "exact" : s.witness});
    rep.rows.push_back({"series-signs", s.sign_ok, s.sign_ok ? "exact" : s.witness});
    rep.rows.push_back({"series-budget", s.budget_ok,
                        "absolute sums within C, " + std::to_string(s.budget_tight) +
                            " leaves tight" + (s.budget_ok ? "" : "; " + s.witness)});
  }
  if (in.embedding) {
    const Embedding& emb = *in.embedding;
    LipschitzCheck l = lipschitz_check(emb, in.samples, in.seed);
    rep.rows.push_back({"horizontal-lipschitz", l.passed,
                        std::to_string(l.pairs) + " pairs, tightest ratio " + fmt(l.max_ratio) +
                            (l.passed ? "" : "; witness " + l.witness)});
    PairBoundsCheck b = pair_bounds_check(emb, in.samples, in.seed, in.rho);
    rep.rows.push_back({"vertical-upper", b.vertical_upper_viol == 0,
                        std::to_string(b.pairs) + " pairs" +
                            (b.vertical_upper_viol ? "; witness " + b.witness : "")});
    rep.rows.push_back({"vertical-lower", b.vertical_lower_viol == 0,
                        std::to_string(b.pairs) + " pairs" +
                            (b.vertical_lower_viol ? "; witness " + b.witness : "")});
    rep.rows.push_back({"two-sided-upper", b.full_upper_viol == 0,
                        std::to_string(b.pairs) + " pairs, observed constant " + fmt(b.c_emp)});
    rep.rows.push_back({"stratified-lower", b.lower_viol == 0,
                        std::to_string(b.lower_stratum) + " stratum pairs, " +
                            std::to_string(b.lower_active) + " with positive floors, rho " +
                            fmt(b.rho)});
    QSReport qs = sample_weak_qs(emb, in.samples, in.seed);
    rep.rows.push_back({"weak-quasisymmetry", qs.collisions == 0,
                        std::to_string(qs.kept) + " kept triples, max ratio " +
                            std::to_string(qs.max_ratio) + ", " +
                            std::to_string(qs.collisions) + " collisions"});
    // collinear reduction: with equal paths the image distance is pinched
    // between the horizontal mass and its Lipschitz multiple
    {
      const Rational& C = emb.series().C();
      uint64_t bad = 0;
      uint64_t count = std::min<uint64_t>(in.samples, 256);
      std::string witness;
      for (uint64_t i = 0; i < count; ++i) {
        Rng rng(in.seed, 11, i);
        EmbedPoint x = random_point(rng, emb, 1);
        EmbedPoint a = x;
        a.x = grid_point(rng, emb.grid());
        if (a.x == x.x) continue;
        Rational lo = std::min(x.x, a.x), hi = std::max(x.x, a.x);
        Rational mass = mu_interval(lo, hi, J, emb.grid());
        Rational fsq = emb.F_sq_dist(a, x);
        if (fsq < mass * mass || fsq > (1 + C * C) * mass * mass) {
          ++bad;
          witness = "x1=" + rat_str(x.x) + " a1=" + rat_str(a.x);
        }
      }
      rep.rows.push_back({"collinear-reduction", bad == 0,
                          std::to_string(count) + " pairs pinched by the horizontal mass" +
                              (bad ? "; witness " + witness : "")});
    }
  }
  return rep;
}

}  // namespace qslab
