#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "edif/corrector.hpp"
#include "edif/func_rep.hpp"
#include "edif/rational.hpp"

namespace edif {

/// Ordinal omega * limit + offset standing in for a height.
struct OrdinalLabel {
  std::uint64_t limit{0};
  std::uint64_t offset{0};
  auto operator<=>(const OrdinalLabel&) const = default;
};

/// hgt(e) < hgt(d) < hgt(e) + omega.
inline bool just_above(const OrdinalLabel& d, const OrdinalLabel& e) {
  return d.limit == e.limit && d.offset > e.offset;
}

struct LabeledPoint {
  Rational v;
  OrdinalLabel h;
  bool operator==(const LabeledPoint&) const = default;
};

struct SigmaPair {
  LabeledPoint d, e;
  bool operator==(const SigmaPair&) const = default;
};

struct ConditionMeta {
  Rational zeta{0};
  Rational eps{0};
  std::uint64_t seed{0};
};

/// A forcing condition: finite partial isomorphism plus N layered stages.
/// N is rep.stages().
struct Condition {
  std::vector<SigmaPair> sigma;  // sorted by d
  FuncRep rep;
  ConditionMeta meta;

  std::size_t N() const { return rep.stages(); }
  /// ({(0,0)}, 0).
  static Condition trivial();
  PairList pairs() const;
  std::vector<Rational> domain() const;
  void sort_sigma();
};

enum class ClauseStatus { Pass, Fail, Indeterminate };
const char* to_string(ClauseStatus s);

struct ClauseResult {
  std::string clause;
  ClauseStatus status{ClauseStatus::Pass};
  std::string detail;
};

struct ClauseReport {
  std::vector<ClauseResult> clauses;
  bool ok() const;
  bool indeterminate() const;
  /// "P13: ..." for the first failing clause, empty if none.
  std::string first_failure() const;
  void add(std::string clause, ClauseStatus status, std::string detail = {});
  std::string to_json() const;
};

/// Declared pools; a condition's pairs must be drawn from them when given.
class PointPool {
 public:
  virtual ~PointPool() = default;
  virtual bool contains(const LabeledPoint& p) const = 0;
  /// Up to `count` members nearest to x, closest first.
  virtual std::vector<LabeledPoint> nearest(const Rational& x, std::size_t count) const = 0;
  virtual std::size_t size() const = 0;
};

/// Explicit finite pool.
class ListPool : public PointPool {
 public:
  explicit ListPool(std::vector<LabeledPoint> pts);
  bool contains(const LabeledPoint& p) const override;
  std::vector<LabeledPoint> nearest(const Rational& x, std::size_t count) const override;
  std::size_t size() const override { return pts_.size(); }
  const std::vector<LabeledPoint>& points() const { return pts_; }

 private:
  std::vector<LabeledPoint> pts_;  // sorted by value
};

/// Dyadic grid lo + i 2^step_log2 on [lo, hi] with height
/// (limit, base + (i mod modulus)), generated on demand.
class GridPool : public PointPool {
 public:
  GridPool(Rational lo, Rational hi, long step_log2, std::uint64_t limit, std::uint64_t base, std::uint64_t modulus);
  bool contains(const LabeledPoint& p) const override;
  std::vector<LabeledPoint> nearest(const Rational& x, std::size_t count) const override;
  std::size_t size() const override;
  LabeledPoint at(const BigInt& i) const;

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  long step_log2() const { return step_log2_; }
  std::uint64_t limit() const { return limit_; }
  std::uint64_t base() const { return base_; }
  std::uint64_t modulus() const { return modulus_; }

 private:
  Rational lo_, hi_, step_;
  long step_log2_;
  std::uint64_t limit_, base_, modulus_;
  BigInt count_;
};

struct ValidateOptions {
  const PointPool* dpool{nullptr};
  const PointPool* epool{nullptr};
  std::size_t ap_pairs{1500};
  std::uint64_t seed{7};
  bool probe_all_stages{true};
};

/// Checks every clause P1-P13. Strict inequalities need a margin of four
/// error bounds, otherwise the clause is Indeterminate.
ClauseReport validate(const Condition& p, const ValidateOptions& opts = {});

/// q <= p: Q1 extension, Q2 layer agreement below N^p, Q3 windows.
ClauseReport leq(const Condition& q, const Condition& p);

bool layers_equal(const FuncRep& a, const FuncRep& b, std::size_t n);

}  // namespace edif
