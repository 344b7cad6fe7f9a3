#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "edif/condition.hpp"

namespace edif {

/// One constraint on zeta, evaluated for a candidate value.
struct ZetaEntry {
  std::string name;
  bool ok{false};
  std::string detail;
};

struct ZetaLedger {
  Rational zeta;
  std::vector<ZetaEntry> entries;
  bool ok() const;
  std::string to_json() const;
};

/// Upper cap used when the domain is a single point (mu infinite).
inline Rational zeta_cap() { return pow2(-16); }

/// Minimum distance between distinct domain points; nullopt for one point.
std::optional<Rational> mu(const Condition& p);

/// Evaluates every constraint on zeta for p. The modulus entries are probed
/// on g_N around each domain point.
ZetaLedger zeta_ledger(const Condition& p, const Rational& zeta);

/// Largest power of 2 satisfying the whole ledger.
Rational compute_zeta(const Condition& p);

struct CloseReport {
  bool ok{false};
  std::string reason;
};

/// zeta-closeness of p and q. zeta must equal compute_zeta of both.
CloseReport zeta_close(const Condition& p, const Condition& q, const Rational& zeta);

struct AmalgamateOptions {
  /// Bounds the slope slack left after the correction, relative to the gap.
  /// Unset keeps the slack generous so later extensions have room.
  std::optional<Rational> residual_cap;
  std::uint64_t seed{7};
  ValidateOptions validate;
};

/// Common extension s of zeta-close p and q with N^s = N^p + 1. Throws
/// NotClose, or ValidationFailed naming the first failing clause.
Condition amalgamate(const Condition& p, const Condition& q, const Rational& zeta,
                     const AmalgamateOptions& opts = {});

/// amalgamate(p, p, compute_zeta(p)).
Condition advance(const Condition& p, const AmalgamateOptions& opts = {});

struct ExtendOptions {
  std::size_t candidates{256};
  ValidateOptions validate;
};

/// Root of f* = e where f* is f_N corrected to pass through sigma^p.
Rational target_root(const Condition& p, const Rational& e);

/// q <= p with sigma^q = sigma^p plus one pair (d, e), d drawn from dpool.
/// Throws PreconditionViolated, HeightConflict or NoAdmissiblePoint.
Condition extend_with_target(const Condition& p, const LabeledPoint& e, const PointPool& dpool,
                             const ExtendOptions& opts = {});

struct ConstructionOptions {
  std::uint64_t seed{7};
  /// Residual cap used once no targets remain; gives |f(d) - e| <= 4 cap |d|.
  Rational final_residual_cap{pow2(-32)};
  std::size_t candidates{256};
  /// Called after each round with the round index and the new condition.
  std::function<void(std::size_t, const Condition&)> on_round;
};

struct ConstructionResult {
  Condition condition;
  std::vector<Rational> zetas;  // per advance
  std::size_t targets_used{0};
};

/// Round i extends with targets[i] (when present) and then advances.
ConstructionResult run_construction(const PointPool& dpool, const PointPool* epool,
                                    const std::vector<LabeledPoint>& targets, std::size_t rounds,
                                    const ConstructionOptions& opts = {});

using Threshold = std::function<Rational(const Rational&)>;

/// For every i: positive slope between a[i] and b[i], and |e_b - e_a| < phi(|d_b - d_a|).
/// Throws DivisionByZero when some d's coincide.
bool compatible(const PairList& a, const PairList& b, const Threshold& phi);

}  // namespace edif
