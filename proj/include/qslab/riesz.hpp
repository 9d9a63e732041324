#pragma once

#include <optional>
#include <vector>

#include "qslab/params.hpp"
#include "qslab/ternary.hpp"

namespace qslab {

// Digit positions whose ternary digit modulates the density product. Member j
// contributes a factor (1+2a) when digit_j = 1 and (1-a) otherwise, so the
// product for a level-L cell runs over members j <= L. In derived mode the
// members sit in narrow bands below each construction scale:
//   j in J  <=>  (j-1) > 2^(n_alpha+m_s)  and
//                exists n >= 1:  3^(n-1) r_n < 3^-(j-1) <= gap_n.
// Writing the bands in terms of (j-1) keeps the factor indexed j acting on
// digit j while preserving the cancellation ranges the estimates need: no
// member digit lies in (e_{n-1}, floor(-log3 gap_n)] or in
// (e_n - n, e_n], which is what makes the density-equality and Carleson
// windows exact at every scale of the ladder.
class IndexSet {
 public:
  static IndexSet derived_mode(const Params& p, const Derived& d);
  static IndexSet custom(std::vector<uint32_t> members, const Rational& alpha);

  bool contains(uint32_t j) const;
  uint32_t count_upto(uint32_t level) const;
  // sorted members <= level
  std::vector<uint32_t> members_upto(uint32_t level) const;
  const std::vector<uint32_t>& members() const { return members_; }
  const Rational& alpha() const { return alpha_; }

 private:
  std::vector<uint32_t> members_;
  Rational alpha_;
};

// Density exponent pair: value (1+2a)^ones (1-a)^(count-ones). Kept symbolic
// so deep levels never materialize the full product.
struct Theta {
  uint32_t ones = 0;
  uint32_t count = 0;
};

// Mass of a ternary cell: theta * 3^-level.
struct CellMass {
  Theta theta;
  uint32_t level = 0;
};

Theta theta_of(const TernaryAddress& a, const IndexSet& J);
Theta theta_leftmost(uint32_t level, const IndexSet& J);
Rational theta_value(const Theta& t, const Rational& alpha);
Rational mass_value(const CellMass& c, const Rational& alpha);
double mass_log3(const CellMass& c, const Rational& alpha);

inline CellMass mu_cell(const TernaryAddress& a, const IndexSet& J) {
  return {theta_of(a, J), a.level()};
}

// mu([a,b)) for 0 <= a <= b, endpoints on the level-`grid` ternary grid
// (integer translates allowed; mass is periodic with mass 1 per period).
// Throws DomainError when an endpoint is off-grid.
Rational mu_interval(const Rational& a, const Rational& b, const IndexSet& J, uint32_t grid);

// Distribution function f(t) = mu([0,t]).
inline Rational f_of(const Rational& t, const IndexSet& J, uint32_t grid) {
  if (t < 0) throw DomainError("f is evaluated on t >= 0");
  return mu_interval(Rational(0), t, J, grid);
}

// Monotone enclosure of mu([a, a+len)) for an interval length known only up
// to a rational bracket: endpoints round outward to the grid.
RatInterval mu_interval_enclosure(const Rational& a, const RatInterval& len, const IndexSet& J,
                                  uint32_t grid);

}  // namespace qslab
