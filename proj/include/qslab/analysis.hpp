#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qslab/embedding.hpp"
#include "qslab/rng.hpp"

namespace qslab {

// Adjacent-cell mass ratios over every ternary level <= max_level, plus the
// member-digit adjacency statistic behind the analytic bound.
struct DoublingScan {
  Rational max_ratio;
  std::string witness;
  bool ones_adjacent_ok = true;  // neighbor member-ones counts differ by <= 1
  Rational bound;                // (1+2a)/(1-a)
  bool passed = false;
};

DoublingScan doubling_scan(const IndexSet& J, uint32_t max_level);

struct MeasureAxioms {
  bool total_ok = false;     // level masses sum to 1, every level <= max_level
  bool additive_ok = false;  // parent mass = sum of the three children
  uint64_t chain_checks = 0; // sampled parent/children splits at chain depth
  bool chains_ok = false;
  std::string witness;
  bool passed = false;
};

MeasureAxioms measure_axioms_check(const IndexSet& J, uint32_t max_level, uint32_t chain_depth,
                                   uint64_t chains, uint64_t seed);

// Lebesgue window: ternary cells above the member cut carry mass = length
// exactly; arbitrary grid intervals of length >= 3^-cut stay within [1/3, 2]
// of their length.
struct G0Check {
  uint32_t exact_levels = 0;
  uint64_t sampled = 0;
  uint64_t violations = 0;
  std::string witness;
  bool passed = false;
};

G0Check g0_check(const Params& p, const IndexSet& J, uint64_t samples, uint64_t seed);

// Density transfer: ternary J inside a scale-(n-1) cell with gap_n <= |J|
// <= r_(n-1) has the identical density exponent pair; non-ternary J in the
// tripled cell stays within pinned comparability factors.
struct G1Check {
  uint64_t ternary_pairs = 0;
  uint64_t interval_pairs = 0;
  uint64_t violations = 0;
  Rational max_ratio{0};  // density(J)/density(I) extremes over interval pairs
  Rational min_ratio{0};
  std::string witness;
  bool passed = false;
};

G1Check g1_check(const Params& p, const Derived& d, const IndexSet& J, uint64_t samples,
                 uint64_t seed);

// Horizontal continuity |g(x,y) - g(x',y)| <= C mu([x,x']) over stratified
// pairs: uniform, adjacent leaves, member-scale boundary straddlers.
struct LipschitzCheck {
  uint64_t pairs = 0;
  uint64_t violations = 0;
  Rational max_ratio{0};  // observed diff/bound tightness, bound > 0
  std::string witness;
  bool passed = false;
};

LipschitzCheck lipschitz_check(const Embedding& emb, uint64_t pairs, uint64_t seed);

// Exact two-sided estimates on sampled point pairs: the vertical increment
// bounds, the full upper bound, and the stratified lower bound. c_emp is the
// observed diam-comparability constant feeding the covering certificate.
struct PairBoundsCheck {
  uint64_t pairs = 0;
  uint64_t vertical_upper_viol = 0;
  uint64_t vertical_lower_viol = 0;
  uint64_t full_upper_viol = 0;
  uint64_t lower_stratum = 0;  // pairs with |x1-b1| <= rho |x-b|, certainly
  uint64_t lower_viol = 0;
  uint64_t lower_active = 0;   // stratum pairs whose lower bound is positive
  Rational c_emp{0};           // max d_full / mu_ball over well-separated pairs
  Rational rho;
  std::string witness;
  bool passed = false;
};

PairBoundsCheck pair_bounds_check(const Embedding& emb, uint64_t pairs, uint64_t seed,
                                  Rational rho = Rational(0));

// Identity collapse at zero oscillation: f = id on the grid, F = (x, mids),
// all truncation tails identically zero at full depth.
struct IdentityCheck {
  uint64_t points = 0;
  bool f_identity = false;
  bool F_identity = false;
  bool tails_zero = false;
  std::string witness;
  bool passed = false;
};

IdentityCheck identity_check(const Embedding& emb, uint64_t points, uint64_t seed);

struct QSWitness {
  EmbedPoint x, a, b;
  Rational in_sq;     // |a-x|^2 / |b-x|^2
  Rational ratio_sq;  // |F(a)-F(x)|^2 / |F(b)-F(x)|^2
  std::string text;
};

struct QSReport {
  uint64_t requested = 0;
  uint64_t kept = 0;        // triples with 0 < |a-x|^2 <= |b-x|^2
  uint64_t degenerate = 0;  // x = b or a = x dropped
  uint64_t collisions = 0;  // F(b) = F(x) with b != x (injectivity failures)
  Rational max_ratio_sq{0};
  double max_ratio = 0;
  std::array<double, 9> profile{};  // max ratio by input-ratio octave, 8 = rest
  std::optional<QSWitness> worst;
  std::optional<Rational> bound_sq;  // optional cap on ratio_sq
  uint64_t violations = 0;
  std::vector<QSWitness> violating;
};

// Triples (x, a, b): seeded uniform draws plus a deterministic adversarial
// stratum (gap straddlers, tiny horizontal offsets) shared across seeds.
QSReport sample_weak_qs(const Embedding& emb, uint64_t n, uint64_t seed,
                        std::optional<Rational> ratio_sq_bound = std::nullopt);

// Exact re-evaluation of a witness; reproducibility means this returns the
// recorded ratio bit for bit.
Rational reeval_ratio_sq(const Embedding& emb, const QSWitness& w);

struct SuiteRow {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::vector<SuiteRow> rows;
  bool all_passed() const {
    for (const auto& r : rows)
      if (!r.passed) return false;
    return true;
  }
};

struct SuiteInputs {
  const Params* params = nullptr;
  const Derived* derived = nullptr;
  const IndexSet* index_set = nullptr;  // required
  const Ladder* ladder = nullptr;
  const CarlesonSeries* series = nullptr;
  const Embedding* embedding = nullptr;
  uint32_t scan_level = 6;  // exhaustive ternary depth for measure-level rows
  uint64_t samples = 1000;
  uint64_t chains = 10000;
  uint64_t leaf_budget = 2000000;
  uint64_t seed = 1;
  Rational rho;  // 0 = derive the default from the series constant
};

// One row per check; sections without inputs are skipped, failures never
// throw. Exact rows carry witnesses in the detail text.
SuiteReport run_suite(const SuiteInputs& in);

}  // namespace qslab
