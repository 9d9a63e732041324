#include "qslab/cantor.hpp"

namespace qslab {

Rational CantorSystem::left_of(const std::vector<BigInt>& path) const {
  Rational left = root_left();
  for (size_t k = 0; k < path.size(); ++k) {
    const auto& lvl = derived_.levels.at(k + 1);
    if (path[k] < 0 || path[k] >= lvl.m) throw DomainError("path index out of range");
    left += Rational(path[k]) * lvl.stride;
  }
  return left;
}

Rational CantorSystem::mid_of(const std::vector<BigInt>& path) const {
  return left_of(path) + derived_.levels.at(path.size()).r / 2;
}

Rational CantorSystem::right_of(const std::vector<BigInt>& path) const {
  return left_of(path) + derived_.levels.at(path.size()).r;
}

Rational CantorSystem::parent_mid(const std::vector<BigInt>& path, uint32_t n) const {
  if (n > path.size()) throw DomainError("parent level deeper than path");
  std::vector<BigInt> prefix(path.begin(), path.begin() + n);
  return mid_of(prefix);
}

std::vector<BigInt> CantorSystem::locate(const Rational& y, uint32_t depth) const {
  std::vector<BigInt> path;
  Rational left = root_left();
  if (y < left || y > left + 1) throw DomainError("point outside the root interval");
  for (uint32_t n = 1; n <= depth; ++n) {
    const auto& lvl = derived_.levels[n];
    // candidate child by stride, then exact membership in the closed interval
    Rational offset = y - left;  // >= 0 by the previous level's containment check
    BigInt idx = (offset.get_num() * lvl.stride.get_den()) / (offset.get_den() * lvl.stride.get_num());
    if (idx >= lvl.m) idx = lvl.m - 1;
    Rational child_left = left + Rational(idx) * lvl.stride;
    if (y > child_left + lvl.r)
      throw DomainError("point in a gap at level " + std::to_string(n));
    path.push_back(idx);
    left = child_left;
  }
  return path;
}

BigInt CantorSystem::count_at(uint32_t n) const {
  BigInt c = 1;
  for (uint32_t k = 1; k <= n; ++k) c *= derived_.levels.at(k).m;
  return c;
}

void CantorSystem::enumerate(uint32_t n, const BigInt& budget,
                             const std::function<void(const std::vector<BigInt>&, const Rational&)>& fn) const {
  BigInt total = count_at(n);
  if (total > budget)
    throw BudgetError("level " + std::to_string(n) + " has " + total.get_str() +
                      " intervals, budget " + budget.get_str());
  std::vector<BigInt> path(n, BigInt(0));
  while (true) {
    fn(path, left_of(path));
    // odometer increment
    size_t k = n;
    while (k > 0) {
      path[k - 1] += 1;
      if (path[k - 1] < derived_.levels[k].m) break;
      path[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }
}

}  // namespace qslab
