#include "edif/error.hpp"
#include "edif/forcing.hpp"

namespace edif {

ConstructionResult run_construction(const PointPool& dpool, const PointPool* epool,
                                    const std::vector<LabeledPoint>& targets, std::size_t rounds,
                                    const ConstructionOptions& opts) {
  ValidateOptions vopts;
  vopts.dpool = &dpool;
  vopts.epool = epool;
  vopts.seed = opts.seed;

  if (epool)
    for (const auto& t : targets)
      if (!epool->contains(t)) throw Error(ErrorKind::InvalidInput, "target " + format_rational(t.v) + " not in the E pool");

  ConstructionResult out;
  out.condition = Condition::trivial();
  out.condition.meta.seed = opts.seed;
  for (std::size_t i = 0; i < rounds; ++i) {
    if (i < targets.size()) {
      ExtendOptions eo;
      eo.candidates = opts.candidates;
      eo.validate = vopts;
      out.condition = extend_with_target(out.condition, targets[i], dpool, eo);
      ++out.targets_used;
    }
    AmalgamateOptions ao;
    ao.seed = opts.seed;
    ao.validate = vopts;
    // Later extensions need room around their roots; only the final rounds
    // pin f tightly to sigma.
    if (i + 1 >= targets.size()) ao.residual_cap = opts.final_residual_cap;
    Rational zeta = compute_zeta(out.condition);
    out.zetas.push_back(zeta);
    out.condition = amalgamate(out.condition, out.condition, zeta, ao);
    if (opts.on_round) opts.on_round(i, out.condition);
  }
  return out;
}

bool compatible(const PairList& a, const PairList& b, const Threshold& phi) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidInput, "tuples must have equal length");
  bool ok = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational dd = b[i].first - a[i].first;
    if (sgn(dd) == 0) throw Error(ErrorKind::DivisionByZero, "equal d at index " + std::to_string(i));
    Rational de = b[i].second - a[i].second;
    if (sgn(de / dd) <= 0 || !(abs(de) < phi(abs(dd)))) ok = false;
  }
  return ok;
}

}  // namespace edif
