#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "edif/ternary.hpp"

namespace edif {

/// Element of S = {0,2}^{<omega}: a finite prefix that overrides leading digits.
struct CodePrefix {
  DigitWord symbols;
  std::size_t length() const noexcept { return symbols.size(); }
};

/// Closed-form natural-valued families whose tininess (psi(k)^n / k -> 0 for
/// every n) has a pen-and-paper proof. Finite desk-scale stand-in for
/// "tiny": membership in T is checked against one of these.
class TinyFamily {
 public:
  enum class Kind { Constant, PolyLog, Power, Shift };

  /// k -> c
  static TinyFamily constant(std::uint64_t c);
  /// k -> ceil(c * log2(k + 2)^a)
  static TinyFamily polylog(double c, unsigned a);
  /// k -> inner(k)^r
  static TinyFamily power(const TinyFamily& inner, unsigned r);
  /// k -> r + inner(k + r)
  static TinyFamily shift(const TinyFamily& inner, unsigned r);

  std::uint64_t operator()(std::uint64_t k) const;
  std::vector<std::uint64_t> values(std::uint64_t kmax) const;
  Kind kind() const noexcept { return kind_; }
  /// Every node is one of the certified constructors.
  bool certified() const noexcept { return true; }
  std::string describe() const;

 private:
  TinyFamily() = default;
  Kind kind_{Kind::Constant};
  std::uint64_t c_int_{0};
  double c_{0.0};
  unsigned a_{0};
  std::shared_ptr<const TinyFamily> inner_;
};

/// Finite profile psi(0..K) with an optional certifying family.
struct TinyProfile {
  std::vector<std::uint64_t> values;
  std::shared_ptr<const TinyFamily> family;

  bool matches_family() const;
};

/// z = f_i^s(x) to `depth` digits: B^z_k(j) = B^x_{k-2}(phi(i,j)), then the
/// first lh(s) digits replaced by s.
TernaryPoint encode(std::uint64_t i, const CodePrefix& s, const TernaryPoint& x,
                    const BlockSchedule& sched, std::size_t depth);

struct DecodeResult {
  TernaryPoint x;
  std::vector<CodePrefix> shifts;
  std::vector<std::uint64_t> psi;          // psi(k) used for x's blocks
  std::vector<std::size_t> thresholds;     // r_i
  std::size_t verified_depth{0};
};

/// Builds x and prefixes s_i with f_i^{s_i}(x) = y_i digit-for-digit up to
/// `depth` = Gamma(K) for some stored K. All ys need at least `depth` digits.
DecodeResult decode(const std::vector<TernaryPoint>& ys, const BlockSchedule& sched, std::size_t depth);

struct FlatnessRow {
  std::size_t k;
  BigInt exponent;      // -Gamma(k+2) + 1 + q Gamma(k+1)
  std::size_t pairs;    // sampled pairs with Gamma(k) <= delta < Gamma(k+1)
  std::size_t violations;
};

struct FlatnessReport {
  std::uint64_t i;
  std::size_t q;
  std::vector<FlatnessRow> rows;
  /// Least k from which the tabulated exponent is negative and strictly
  /// decreasing; rows.size() if no such k in the table.
  std::size_t k0;
  std::size_t total_violations() const;
  std::string to_json() const;
};

/// Gamma(k), continuing past the stored levels by squaring (the least
/// admissible continuation).
BigInt gamma_big(const BlockSchedule& sched, std::size_t k);

BigInt flatness_exponent(const BlockSchedule& sched, std::size_t k, std::size_t q);

/// Digit-space flatness certificate for f_i^s. Pairs are sampled at `depth`
/// digits; only levels with Gamma(k+2) <= depth get sampled pairs.
FlatnessReport flatness_certificate(std::uint64_t i, const CodePrefix& s, std::size_t q, std::size_t kmax,
                                    const BlockSchedule& sched, std::size_t depth, std::size_t pairs,
                                    std::mt19937_64& rng);

/// l_k^x <= family(k) for every k whose block is fully stored.
bool in_T_surrogate(const TernaryPoint& x, const BlockSchedule& sched, const TinyFamily& family);

/// Profile k -> l_k^x over fully stored blocks.
std::vector<std::uint64_t> ell_profile(const TernaryPoint& x, const BlockSchedule& sched);

/// Random point whose block profile is bounded by `family` (each block has
/// random digits below family(k), zeros above).
TernaryPoint random_tiny_point(const BlockSchedule& sched, std::size_t depth, const TinyFamily& family,
                               std::mt19937_64& rng);

}  // namespace edif
