#pragma once

#include "qslab/cantor.hpp"
#include "qslab/carleson.hpp"
#include "qslab/riesz.hpp"

namespace qslab {

// Value of a truncated increment series together with an exact bound on the
// dropped terms. Full-depth truncation has tail 0: path points are depth-N
// midpoints, so every deeper parent increment vanishes identically.
struct GValue {
  Rational value;
  Rational tail;
};

// Point of [0,1] x E^(d-1): a grid abscissa and d-1 index paths.
struct EmbedPoint {
  Rational x;
  std::vector<std::vector<BigInt>> paths;
};

struct BoundsReport {
  uint32_t split = 0;        // deepest common ancestor level of the two paths
  Rational y_diff;           // |y_{n+1}(x2) - y_{n+1}(b2)|
  Rational d_vert;           // |g(x1,x2) - g(x1,b2)|
  Rational d_full;           // |g(x1,x2) - g(b1,b2)|
  Rational theta_n, theta_n_right;
  Rational mu_next;          // mu(I_{n+1}(x1))
  Rational main_term;        // y_diff * theta_n
  Rational main_term_min;    // y_diff * min(theta_n, theta_n_right)
  Rational deep_mass;        // sum_{k>n} mu(I_k(x1))
  Rational upper_bound;      // D (main_term + deep_mass)
  Rational lower_bound;      // main_term_min - D deep_mass
  bool upper_ok = false;     // d_vert <= upper_bound (exact)
  bool lower_ok = false;     // d_vert >= lower_bound (exact)
  Rational gap_next;         // sibling gap at level n+1
  Rational gap_term;         // (3/4) gap_next
  RatInterval dist;          // |x - b|
  RatInterval mu_ball;       // mu([x1, x1 + |x-b|))
  Rational mu_horiz;         // mu([x1, x1 + |x1-b1|))
  Rational f_diff;           // |f(x1) - f(b1)|
  Rational two_sided_upper;  // upper_bound + C mu_horiz, dominates d_full exactly
  bool full_upper_ok = false;
};

class Embedding {
 public:
  Embedding(const CantorSystem& cantor, const IndexSet& J, const CarlesonSeries& series);

  uint32_t depth() const { return cantor_.depth(); }
  uint32_t grid() const { return series_.ladder().leaf_level(); }

  Rational f(const Rational& x) const { return f_of(x, J_, grid()); }

  // vertical map at x = 0; terms = number of leading increments kept
  GValue g_zero(const std::vector<BigInt>& path, uint32_t terms) const;
  GValue g(const Rational& x, const std::vector<BigInt>& path, uint32_t terms) const;

  GValue g_full(const Rational& x, const std::vector<BigInt>& path) const {
    return g(x, path, depth());
  }

  // (f(x), g(x, path_1), ..., g(x, path_{d-1})) at full truncation
  std::vector<Rational> F(const EmbedPoint& p) const;

  // exact squared Euclidean distance |F(p) - F(q)|^2
  Rational F_sq_dist(const EmbedPoint& p, const EmbedPoint& q) const;

  BoundsReport bounds(const Rational& x1, const std::vector<BigInt>& x2,
                      const Rational& b1, const std::vector<BigInt>& b2) const;

  // |g(x,y) - g(x',y)| and its exact bound C mu([x,x'])
  std::pair<Rational, Rational> lipschitz_pair(const Rational& x, const Rational& xp,
                                               const std::vector<BigInt>& path) const;

  const CantorSystem& cantor() const { return cantor_; }
  const IndexSet& index_set() const { return J_; }
  const CarlesonSeries& series() const { return series_; }

 private:
  const CantorSystem& cantor_;
  const IndexSet& J_;
  const CarlesonSeries& series_;
  std::vector<Rational> left_mass_;   // mu([0, r_k)) for k = 0..N
  std::vector<Rational> left_theta_;  // Theta([0, r_k])
};

}  // namespace qslab
