#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edif/rational.hpp"

namespace edif {

using Digit = std::uint8_t;
using DigitWord = std::vector<Digit>;

/// A point of the Cantor set H in [0,3], stored as a finite ternary word over
/// {0,2}. Digit n is the coefficient of 3^-n, so digit 0 is the integer part.
class TernaryPoint {
 public:
  explicit TernaryPoint(DigitWord digits);

  static TernaryPoint zeros(std::size_t depth);
  /// Parses "2.0202..." (first digit before the point).
  static TernaryPoint parse(std::string_view text);

  std::size_t depth() const noexcept { return digits_.size(); }
  Digit operator[](std::size_t n) const { return digits_.at(n); }
  std::span<const Digit> digits() const noexcept { return digits_; }

  /// Exact value sum digits(n) * 3^-n.
  Rational value() const;
  std::string str() const;

  friend bool operator==(const TernaryPoint&, const TernaryPoint&) = default;

 private:
  DigitWord digits_;
};

/// Strictly increasing Gamma with Gamma(0) = 0 and Gamma(k+1) >= Gamma(k)^2.
class BlockSchedule {
 public:
  explicit BlockSchedule(std::vector<std::uint64_t> gamma);

  /// 0, 1, 2, 4, 16, 256, 65536 (the least admissible schedule).
  static BlockSchedule minimal(std::size_t levels = 7);

  std::uint64_t operator()(std::size_t k) const { return gamma_.at(k); }
  std::size_t levels() const noexcept { return gamma_.size(); }
  /// Length of block k, Gamma(k+1) - Gamma(k).
  std::uint64_t block_length(std::size_t k) const;
  /// Largest k with Gamma(k) <= n.
  std::size_t level_of(std::uint64_t n) const;

 private:
  std::vector<std::uint64_t> gamma_;
};

/// Shell-ordered pairing: shells of constant max(i,j) = m are enumerated as
/// (0,m),(1,m),...,(m,m),(m,m-1),...,(m,0), so m^2 <= phi(i,j) < (m+1)^2.
std::uint64_t pair_phi(std::uint64_t i, std::uint64_t j);
std::pair<std::uint64_t, std::uint64_t> unpair_phi(std::uint64_t n);

/// Least n with x(n) != y(n).
std::size_t delta(const TernaryPoint& x, const TernaryPoint& y);

/// B^x_k as a word of length Gamma(k+1) - Gamma(k); empty for k < 0.
DigitWord block(const TernaryPoint& x, long k, const BlockSchedule& sched);

/// B^x_k(j) with the zero padding beyond the block length and for k < 0.
Digit block_digit(const TernaryPoint& x, long k, std::uint64_t j, const BlockSchedule& sched);

/// Least l with B^x_k(j) = 0 for all j >= l.
std::uint64_t ell(const TernaryPoint& x, std::size_t k, const BlockSchedule& sched);

/// Concatenates blocks 0..K-1 back into a digit word.
TernaryPoint from_blocks(std::span<const DigitWord> blocks);

}  // namespace edif
