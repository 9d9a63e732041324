#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qslab/rational.hpp"

namespace qslab {

// Half-open ternary grid interval [left, left + 3^-level) identified by its
// digit string. Digits are packed two bits each, 32 per word, indexed from 1
// (coarsest). `wraps` counts whole periods so right_neighbor stays total on
// the circle: position = wraps + 0.d1 d2 ... dlevel (base 3).
class TernaryAddress {
 public:
  TernaryAddress() = default;
  explicit TernaryAddress(uint32_t level) { resize(level); }

  uint32_t level() const { return level_; }
  int64_t wraps() const { return wraps_; }
  void set_wraps(int64_t w) { wraps_ = w; }

  unsigned digit(uint32_t i) const {
    // i in [1, level]
    uint32_t b = i - 1;
    return static_cast<unsigned>((words_[b >> 5] >> ((b & 31) * 2)) & 3u);
  }

  void set_digit(uint32_t i, unsigned d) {
    uint32_t b = i - 1;
    uint64_t& w = words_[b >> 5];
    unsigned sh = (b & 31) * 2;
    w = (w & ~(uint64_t(3) << sh)) | (uint64_t(d & 3) << sh);
  }

  void append(unsigned d) {
    resize(level_ + 1);
    set_digit(level_, d);
  }

  TernaryAddress prefix(uint32_t lvl) const {
    TernaryAddress out(lvl);
    out.wraps_ = wraps_;
    for (uint32_t i = 1; i <= lvl; ++i) out.set_digit(i, digit(i));
    return out;
  }

  // integer index of the cell within [0,1): sum digit_i 3^(level-i)
  BigInt index() const {
    BigInt v = 0;
    for (uint32_t i = 1; i <= level_; ++i) {
      v *= 3;
      v += digit(i);
    }
    return v;
  }

  Rational left() const {
    Rational q(index(), big_pow3(level_));
    q.canonicalize();
    return q + wraps_;
  }

  Rational width() const { return pow3(-static_cast<long>(level_)); }
  Rational right() const { return left() + width(); }

  // successor on the grid; carries may spill into wraps
  TernaryAddress right_neighbor() const {
    TernaryAddress out = *this;
    for (uint32_t i = level_; i >= 1; --i) {
      unsigned d = out.digit(i);
      if (d < 2) {
        out.set_digit(i, d + 1);
        return out;
      }
      out.set_digit(i, 0);
    }
    out.wraps_ += 1;
    return out;
  }

  bool operator==(const TernaryAddress& o) const {
    return level_ == o.level_ && wraps_ == o.wraps_ && words_ == o.words_;
  }

  std::string to_string() const {
    std::string s = "0.";
    for (uint32_t i = 1; i <= level_; ++i) s += static_cast<char>('0' + digit(i));
    s += "(3)";
    if (wraps_ != 0) s += "+" + std::to_string(wraps_);
    return s;
  }

 private:
  void resize(uint32_t level) {
    level_ = level;
    words_.resize((level + 31) / 32, 0);
  }

  std::vector<uint64_t> words_;
  uint32_t level_ = 0;
  int64_t wraps_ = 0;
};

// Cell of the level grid containing t (floor semantics). Exact for every
// rational input; ternary rationals of depth <= level land on their own cell.
inline TernaryAddress address_of(const Rational& t, uint32_t level) {
  BigInt scaled = t.get_num() * big_pow3(level);
  BigInt idx, rem;
  mpz_fdiv_qr(idx.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t(), t.get_den().get_mpz_t());
  BigInt period = big_pow3(level);
  BigInt wraps_z, cell;
  mpz_fdiv_qr(wraps_z.get_mpz_t(), cell.get_mpz_t(), idx.get_mpz_t(), period.get_mpz_t());
  TernaryAddress out(level);
  if (!wraps_z.fits_slong_p()) throw DomainError("address too far from [0,1)");
  out.set_wraps(wraps_z.get_si());
  for (uint32_t i = level; i >= 1; --i) {
    out.set_digit(i, static_cast<unsigned>(mpz_fdiv_ui(cell.get_mpz_t(), 3)));
    cell /= 3;
  }
  return out;
}

inline TernaryAddress address_from_index(const BigInt& idx, uint32_t level) {
  BigInt cell = idx;
  TernaryAddress out(level);
  for (uint32_t i = level; i >= 1; --i) {
    out.set_digit(i, static_cast<unsigned>(mpz_fdiv_ui(cell.get_mpz_t(), 3)));
    cell /= 3;
  }
  return out;
}

// True if t lies on the level grid (t * 3^level integral).
inline bool on_grid(const Rational& t, uint32_t level) {
  BigInt scaled = t.get_num() * big_pow3(level);
  return mpz_divisible_p(scaled.get_mpz_t(), t.get_den().get_mpz_t()) != 0;
}

inline TernaryAddress parse_address(const std::string& digits) {
  TernaryAddress out(static_cast<uint32_t>(digits.size()));
  for (uint32_t i = 1; i <= digits.size(); ++i) {
    char c = digits[i - 1];
    if (c < '0' || c > '2') throw ConfigError("bad ternary digit string: " + digits);
    out.set_digit(i, static_cast<unsigned>(c - '0'));
  }
  return out;
}

}  // namespace qslab
