#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "edif/func_rep.hpp"
#include "edif/rational.hpp"

namespace edif {

/// Finite order-preserving map as (d, e) pairs.
using PairList = std::vector<std::pair<Rational, Rational>>;

/// Pin-exclusion radius relative to the local gap.
inline Rational pin_exclusion_fraction() { return pow2(-10); }

struct GapCheck {
  Rational d0, d1;
  double slack{0};  // (e1-e0)/(d1-d0) - (f(d1)-f(d0))/(d1-d0)
  double err{0};
  Rational mass;    // (e1-e0) - (f(d1)-f(d0)) as evaluated
  enum class Verdict { Pass, Fail, Indeterminate } verdict{Verdict::Pass};
};

struct CorrectabilityReport {
  std::vector<GapCheck> gaps;
  std::vector<std::string> violations;
  bool indeterminate{false};
  bool all_pairs_ok{true};
  bool ok() const { return violations.empty() && !indeterminate; }
  std::string to_json() const;
};

/// Checks the correctability of (tau, g, f, iota) where g, f are the given
/// stage of `rep`: tau contains (0, 0), is order preserving, and adjacent
/// slopes exceed those of f by an amount in (0, iota). Strict inequalities
/// need a margin of four error bounds; otherwise the gap is Indeterminate.
CorrectabilityReport correctable_check(const PairList& tau, const FuncRep& rep, std::size_t stage,
                                       const Rational& iota);

/// Masses over consecutive gaps of `nodes`, to be realized exactly.
struct MassPlan {
  std::vector<Rational> nodes;   // sorted domain points
  std::vector<Rational> masses;  // masses[i] on (nodes[i], nodes[i+1])
  Rational iota;
  std::vector<Rational> pins;    // extra zeros
};

/// Nonnegative C^1 bump with the prescribed exact integral on every gap,
/// height < iota, zero at every node and pin, compact support. Throws
/// MassOutOfRange when a mass is not in (0, iota * usable width).
PiecewiseBump build_bump(const MassPlan& plan);

/// Masses (e1 - e0) - (f(d1) - f(d0)) taken from the representation, then
/// build_bump. `shave(mass, gap)` is subtracted from each mass; leave it
/// empty for exact correction.
using MassShave = std::function<Rational(const Rational& mass, const Rational& gap)>;
PiecewiseBump build_correction(const PairList& tau, const FuncRep& rep, std::size_t stage, const Rational& iota,
                               const std::vector<Rational>& pins, const MassShave& shave = {});

}  // namespace edif
