#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qslab/riesz.hpp"

namespace qslab {

// Ascending ternary depths of the interval ladder; entry k is the depth of
// generation k. Derived configs use the scale exponents e_0..e_N.
struct Ladder {
  std::vector<uint32_t> levels;

  uint32_t gens() const { return static_cast<uint32_t>(levels.size()) - 1; }
  uint32_t leaf_level() const { return levels.back(); }
  static Ladder from_params(const Params& p);
};

inline int sgn(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

// Relative mass jump to the right neighbor (periodic): (mu(I^r) - mu(I)) / mu(I).
Rational carleson_coefficient(const TernaryAddress& cell, const IndexSet& J);

struct G2Report {
  Rational max_ratio;          // max over ladder cells of sum_{I subset J} |a_I| mu(I) / mu(J)
  std::string witness;         // cell attaining it
  Rational root_ratio;         // the cell [0,1)
  Rational analytic_bound;     // D + 1 + (D+1) tau / (1 - tau)
  bool exhaustive_pass = false;
  uint64_t chain_count = 0;    // mass-proportional descent estimator
  double chain_mean = 0;
  double chain_max = 0;
  bool chain_pass = true;
};

G2Report verify_g2(const Ladder& ladder, const IndexSet& J, const Derived& derived,
                   uint64_t leaf_budget, uint64_t chains, uint64_t seed);

// Carleson sum over descendants of one cell (the cell itself included).
Rational carleson_sum(const TernaryAddress& cell, const Ladder& ladder, const IndexSet& J,
                      uint64_t leaf_budget);

struct SeriesCheck {
  bool mean_ok = false;       // integral of the slice over each cell equals a_I mu(I)
  bool sign_ok = false;       // slice signs match the cell coefficient; zeros only at zero budget
  bool budget_ok = false;     // per-leaf absolute sums bounded by C
  uint64_t budget_tight = 0;  // leaves where the absolute sum equals C exactly
  std::string witness;
};

// Bounded slices Delta_0..Delta_N, constant on leaf cells, built finest-first:
// Delta_N = a_I on I; descending, Delta_k = sign(a_J) tau_J (C - sum_{j>k}|Delta_j|)
// with tau_J chosen so the cell mean matches a_J mu(J).
class CarlesonSeries {
 public:
  CarlesonSeries(Ladder ladder, const IndexSet& J, Rational C, uint64_t leaf_budget);

  const Ladder& ladder() const { return ladder_; }
  const Rational& C() const { return C_; }
  uint64_t leaves() const { return leaf_count_; }
  const Rational& leaf_mass(uint64_t i) const { return mass_[i]; }
  const Rational& value(uint32_t gen, uint64_t leaf) const { return delta_[gen][leaf]; }

  // integral_0^x Delta_k dmu; x >= 0 on the leaf grid (whole periods wrap to 0)
  Rational integral(uint32_t gen, const Rational& x) const;
  // same with |Delta_k|
  Rational abs_integral(uint32_t gen, const Rational& x) const;

  SeriesCheck verify(const IndexSet& J) const;

  // versioned cache keyed by the config hash; loads return false on any mismatch
  void save(const std::string& path, uint64_t config_hash) const;
  static bool load(const std::string& path, uint64_t config_hash, const Ladder& expect,
                   const Rational& expect_C, CarlesonSeries& out, const IndexSet& J,
                   uint64_t leaf_budget);
  static std::optional<CarlesonSeries> try_load(const std::string& path, uint64_t config_hash,
                                                const Ladder& expect, const Rational& expect_C,
                                                const IndexSet& J, uint64_t leaf_budget);

 private:
  CarlesonSeries() = default;
  void build_prefixes();

  Ladder ladder_;
  Rational C_;
  uint64_t leaf_count_ = 0;
  std::vector<Rational> mass_;                    // per leaf
  std::vector<std::vector<Rational>> delta_;      // [gen][leaf]
  std::vector<std::vector<Rational>> prefix_;     // [gen][leaf+1], sum delta*mass
  std::vector<std::vector<Rational>> abs_prefix_;
};

}  // namespace qslab
