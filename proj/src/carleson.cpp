#include "qslab/carleson.hpp"

#include <fstream>

#include "qslab/rng.hpp"

namespace qslab {

Ladder Ladder::from_params(const Params& p) {
  Ladder out;
  out.levels.reserve(p.exponents.size());
  for (uint64_t e : p.exponents) out.levels.push_back(static_cast<uint32_t>(e));
  return out;
}

Rational carleson_coefficient(const TernaryAddress& cell, const IndexSet& J) {
  Theta t = theta_of(cell, J);
  Theta tr = theta_of(cell.right_neighbor(), J);
  // a_I = Theta(I^r)/Theta(I) - 1, same level so the 3^-level factors cancel
  const Rational& a = J.alpha();
  Rational ratio = 1;
  if (tr.ones >= t.ones)
    ratio *= rat_pow(1 + 2 * a, tr.ones - t.ones);
  else
    ratio /= rat_pow(1 + 2 * a, t.ones - tr.ones);
  uint32_t z = t.count - t.ones, zr = tr.count - tr.ones;
  if (zr >= z)
    ratio *= rat_pow(1 - a, zr - z);
  else
    ratio /= rat_pow(1 - a, z - zr);
  return ratio - 1;
}

namespace {

uint64_t checked_leaf_count(uint32_t leaf_level, uint64_t leaf_budget) {
  BigInt total = big_pow3(leaf_level);
  if (total > BigInt(leaf_budget))
    throw BudgetError("ladder needs " + total.get_str() + " leaf cells, budget " +
                      std::to_string(leaf_budget));
  return total.get_ui();
}

std::vector<Rational> leaf_masses(uint32_t leaf_level, uint64_t count, const IndexSet& J) {
  std::vector<Rational> mass(count);
  TernaryAddress cell(leaf_level);
  for (uint64_t i = 0; i < count; ++i) {
    mass[i] = mass_value(mu_cell(cell, J), J.alpha());
    cell = cell.right_neighbor();
  }
  return mass;
}

}  // namespace

G2Report verify_g2(const Ladder& ladder, const IndexSet& J, const Derived& derived,
                   uint64_t leaf_budget, uint64_t chains, uint64_t seed) {
  G2Report rep;
  rep.analytic_bound = derived.c_inf;
  uint32_t K = ladder.gens();
  uint64_t leaves = checked_leaf_count(ladder.leaf_level(), leaf_budget);
  std::vector<Rational> mass = leaf_masses(ladder.leaf_level(), leaves, J);

  // bottom-up subtree sums T(J) = |a_J| mu(J) + sum over children
  std::vector<Rational> subtree(leaves);
  std::vector<Rational> cell_mass = mass;
  rep.max_ratio = 0;
  for (uint32_t k = K + 1; k-- > 0;) {
    uint64_t cells = 1;
    for (uint32_t i = 0; i < ladder.levels[k]; ++i) cells *= 3;
    uint64_t child_stride = (k == K) ? 1 : (cell_mass.size() / cells);
    std::vector<Rational> next_mass(cells), next_subtree(cells);
    TernaryAddress cell(ladder.levels[k]);
    for (uint64_t c = 0; c < cells; ++c) {
      Rational m, t;
      if (k == K) {
        m = mass[c];
        t = 0;
      } else {
        for (uint64_t i = c * child_stride; i < (c + 1) * child_stride; ++i) {
          m += cell_mass[i];
          t += subtree[i];
        }
      }
      Rational a = carleson_coefficient(cell, J);
      t += abs(a) * m;
      Rational ratio = t / m;
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.witness = "gen " + std::to_string(k) + " cell " + cell.to_string();
      }
      if (k == 0) rep.root_ratio = ratio;
      next_mass[c] = m;
      next_subtree[c] = t;
      cell = cell.right_neighbor();
    }
    cell_mass = std::move(next_mass);
    subtree = std::move(next_subtree);
  }
  rep.exhaustive_pass = rep.max_ratio <= rep.analytic_bound;

  // mass-proportional descent: each chain's sum of |a| along its cells is an
  // unbiased estimate of the root ratio
  rep.chain_count = chains;
  const Rational& alpha = J.alpha();
  unsigned long p = alpha.get_num().get_ui(), q = alpha.get_den().get_ui();
  double total = 0;
  for (uint64_t c = 0; c < chains; ++c) {
    Rng rng(seed, 1, c);
    TernaryAddress cell(0);
    double chain_sum = 0;
    uint32_t next_gen = 0;
    for (uint32_t digit = 1; digit <= ladder.leaf_level(); ++digit) {
      if (next_gen < ladder.levels.size() && ladder.levels[next_gen] == digit - 1) {
        chain_sum += std::abs(to_double(carleson_coefficient(cell.prefix(digit - 1), J)));
        ++next_gen;
      }
      unsigned d;
      if (J.contains(digit)) {
        uint64_t r = rng.below(3 * q);
        d = (r < q - p) ? 0u : (r < 2 * q + p ? 1u : 2u);
      } else {
        d = static_cast<unsigned>(rng.below(3));
      }
      cell.append(d);
    }
    chain_sum += std::abs(to_double(carleson_coefficient(cell, J)));
    total += chain_sum;
    rep.chain_max = std::max(rep.chain_max, chain_sum);
  }
  rep.chain_mean = chains ? total / static_cast<double>(chains) : 0;
  rep.chain_pass = rep.chain_mean <= to_double(rep.analytic_bound) * (1 + 1e-12) + 1e-12;
  return rep;
}

Rational carleson_sum(const TernaryAddress& cell, const Ladder& ladder, const IndexSet& J,
                      uint64_t leaf_budget) {
  uint32_t gen = 0;
  while (gen < ladder.levels.size() && ladder.levels[gen] != cell.level()) ++gen;
  if (gen == ladder.levels.size()) throw DomainError("cell level is not a ladder generation");
  BigInt below = big_pow3(ladder.leaf_level() - cell.level());
  if (below > BigInt(leaf_budget)) throw BudgetError("subtree exceeds leaf budget");

  Rational total = 0;
  BigInt base = cell.index();
  for (uint32_t k = gen; k < ladder.levels.size(); ++k) {
    uint32_t lvl = ladder.levels[k];
    BigInt first = base * big_pow3(lvl - cell.level());
    uint64_t count = big_pow3(lvl - cell.level()).get_ui();
    TernaryAddress sub = address_from_index(first, lvl);
    for (uint64_t i = 0; i < count; ++i) {
      total += abs(carleson_coefficient(sub, J)) * mass_value(mu_cell(sub, J), J.alpha());
      sub = sub.right_neighbor();
    }
  }
  return total;
}

CarlesonSeries::CarlesonSeries(Ladder ladder, const IndexSet& J, Rational C, uint64_t leaf_budget)
    : ladder_(std::move(ladder)), C_(std::move(C)) {
  uint32_t K = ladder_.gens();
  leaf_count_ = checked_leaf_count(ladder_.leaf_level(), leaf_budget);
  mass_ = leaf_masses(ladder_.leaf_level(), leaf_count_, J);
  delta_.assign(K + 1, {});

  std::vector<Rational> deeper_abs(leaf_count_, Rational(0));  // sum_{j>k} |Delta_j|
  for (uint32_t k = K + 1; k-- > 0;) {
    uint64_t cells = 1;
    for (uint32_t i = 0; i < ladder_.levels[k]; ++i) cells *= 3;
    uint64_t stride = leaf_count_ / cells;
    auto& row = delta_[k];
    row.assign(leaf_count_, Rational(0));
    TernaryAddress cell(ladder_.levels[k]);
    for (uint64_t c = 0; c < cells; ++c) {
      Rational a = carleson_coefficient(cell, J);
      if (a != 0) {
        uint64_t lo = c * stride, hi = (c + 1) * stride;
        if (k == K) {
          if (abs(a) > C_)
            throw CheckError("series budget below a leaf coefficient: C = " + rat_str(C_) +
                             " < |a| = " + rat_str(abs(a)));
          for (uint64_t i = lo; i < hi; ++i) row[i] = a;
        } else {
          Rational cell_mass, headroom;  // mu(J), integral of (C - deeper) dmu
          for (uint64_t i = lo; i < hi; ++i) {
            cell_mass += mass_[i];
            headroom += (C_ - deeper_abs[i]) * mass_[i];
          }
          Rational target = abs(a) * cell_mass;
          if (headroom <= 0 || target > headroom)
            throw CheckError("series budget saturated at gen " + std::to_string(k) + " cell " +
                             cell.to_string() + "; C is below the local Carleson ratio");
          Rational t = target / headroom;  // in (0, 1]
          for (uint64_t i = lo; i < hi; ++i) row[i] = sgn(a) * t * (C_ - deeper_abs[i]);
        }
      }
      cell = cell.right_neighbor();
    }
    for (uint64_t i = 0; i < leaf_count_; ++i) deeper_abs[i] += abs(row[i]);
  }
  build_prefixes();
}

void CarlesonSeries::build_prefixes() {
  uint32_t K = ladder_.gens();
  prefix_.assign(K + 1, {});
  abs_prefix_.assign(K + 1, {});
  for (uint32_t k = 0; k <= K; ++k) {
    prefix_[k].assign(leaf_count_ + 1, Rational(0));
    abs_prefix_[k].assign(leaf_count_ + 1, Rational(0));
    for (uint64_t i = 0; i < leaf_count_; ++i) {
      prefix_[k][i + 1] = prefix_[k][i] + delta_[k][i] * mass_[i];
      abs_prefix_[k][i + 1] = abs_prefix_[k][i] + abs(delta_[k][i]) * mass_[i];
    }
  }
}

namespace {

uint64_t grid_cells(const Rational& x, uint32_t level) {
  if (x < 0) throw DomainError("integral endpoint below 0");
  if (!on_grid(x, level)) throw DomainError("integral endpoint off the leaf grid");
  BigInt cells = x.get_num() * big_pow3(level) / x.get_den();
  return cells.get_ui();
}

}  // namespace

Rational CarlesonSeries::integral(uint32_t gen, const Rational& x) const {
  uint64_t cells = grid_cells(x, ladder_.leaf_level());
  uint64_t whole = cells / leaf_count_, rem = cells % leaf_count_;
  return Rational(static_cast<unsigned long>(whole)) * prefix_[gen][leaf_count_] +
         prefix_[gen][rem];
}

Rational CarlesonSeries::abs_integral(uint32_t gen, const Rational& x) const {
  uint64_t cells = grid_cells(x, ladder_.leaf_level());
  uint64_t whole = cells / leaf_count_, rem = cells % leaf_count_;
  return Rational(static_cast<unsigned long>(whole)) * abs_prefix_[gen][leaf_count_] +
         abs_prefix_[gen][rem];
}

SeriesCheck CarlesonSeries::verify(const IndexSet& J) const {
  SeriesCheck out;
  out.mean_ok = out.sign_ok = out.budget_ok = true;
  uint32_t K = ladder_.gens();
  std::vector<Rational> deeper_abs(leaf_count_, Rational(0));
  for (uint32_t k = K + 1; k-- > 0;) {
    uint64_t cells = 1;
    for (uint32_t i = 0; i < ladder_.levels[k]; ++i) cells *= 3;
    uint64_t stride = leaf_count_ / cells;
    TernaryAddress cell(ladder_.levels[k]);
    for (uint64_t c = 0; c < cells; ++c) {
      Rational a = carleson_coefficient(cell, J);
      Rational cell_mass, mean;
      for (uint64_t i = c * stride; i < (c + 1) * stride; ++i) {
        cell_mass += mass_[i];
        mean += delta_[k][i] * mass_[i];
        int s = sgn(delta_[k][i]);
        bool zero_ok = (a == 0) || (C_ - deeper_abs[i] == 0);
        if ((s == 0 && !zero_ok) || (s != 0 && s != sgn(a))) {
          out.sign_ok = false;
          if (out.witness.empty()) out.witness = "sign at gen " + std::to_string(k) + " " + cell.to_string();
        }
      }
      if (mean != a * cell_mass) {
        out.mean_ok = false;
        if (out.witness.empty()) out.witness = "mean at gen " + std::to_string(k) + " " + cell.to_string();
      }
      cell = cell.right_neighbor();
    }
    for (uint64_t i = 0; i < leaf_count_; ++i) deeper_abs[i] += abs(delta_[k][i]);
  }
  for (uint64_t i = 0; i < leaf_count_; ++i) {
    if (deeper_abs[i] > C_) {
      out.budget_ok = false;
      if (out.witness.empty()) out.witness = "budget at leaf " + std::to_string(i);
    } else if (deeper_abs[i] == C_) {
      ++out.budget_tight;
    }
  }
  return out;
}

namespace {

void put_u64(std::ostream& os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<char*>(b), 8);
}
uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}
void put_str(std::ostream& os, const std::string& s) {
  put_u64(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}
std::string get_str(std::istream& is) {
  uint64_t n = get_u64(is);
  if (n > (1ull << 32)) throw CheckError("cache string too long");
  std::string s(n, '\0');
  is.read(s.data(), static_cast<std::streamsize>(n));
  return s;
}

constexpr uint64_t kCacheMagic = 0x51534c4331ull;  // "QSLC1"

}  // namespace

void CarlesonSeries::save(const std::string& path, uint64_t config_hash) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw CheckError("cannot write cache: " + path);
  put_u64(os, kCacheMagic);
  put_u64(os, config_hash);
  put_u64(os, ladder_.levels.size());
  for (uint32_t l : ladder_.levels) put_u64(os, l);
  put_str(os, num_str(C_));
  put_str(os, den_str(C_));
  put_u64(os, leaf_count_);
  for (const auto& row : delta_)
    for (const auto& v : row) {
      put_str(os, num_str(v));
      put_str(os, den_str(v));
    }
}

bool CarlesonSeries::load(const std::string& path, uint64_t config_hash, const Ladder& expect,
                          const Rational& expect_C, CarlesonSeries& out, const IndexSet& J,
                          uint64_t leaf_budget) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return false;
  if (get_u64(is) != kCacheMagic || get_u64(is) != config_hash) return false;
  uint64_t nlevels = get_u64(is);
  if (nlevels != expect.levels.size()) return false;
  for (uint32_t l : expect.levels)
    if (get_u64(is) != l) return false;
  // sequence the two reads; argument order inside a call is unspecified
  std::string cn = get_str(is);
  std::string cd = get_str(is);
  Rational C = make_rational(cn, cd);
  if (C != expect_C) return false;
  uint64_t leaves = get_u64(is);

  CarlesonSeries s;
  s.ladder_ = expect;
  s.C_ = C;
  s.leaf_count_ = checked_leaf_count(expect.leaf_level(), leaf_budget);
  if (leaves != s.leaf_count_) return false;
  s.mass_ = leaf_masses(expect.leaf_level(), s.leaf_count_, J);
  s.delta_.assign(expect.levels.size(), {});
  for (auto& row : s.delta_) {
    row.resize(s.leaf_count_);
    for (auto& v : row) {
      std::string n = get_str(is);
      std::string d = get_str(is);
      v = make_rational(n, d);
    }
  }
  if (!is) return false;
  s.build_prefixes();
  out = std::move(s);
  return true;
}

std::optional<CarlesonSeries> CarlesonSeries::try_load(const std::string& path,
                                                       uint64_t config_hash, const Ladder& expect,
                                                       const Rational& expect_C, const IndexSet& J,
                                                       uint64_t leaf_budget) {
  CarlesonSeries s;
  if (!load(path, config_hash, expect, expect_C, s, J, leaf_budget)) return std::nullopt;
  return std::optional<CarlesonSeries>(std::move(s));
}

}  // namespace qslab
