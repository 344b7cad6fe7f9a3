#include <algorithm>
#include <cmath>
#include <limits>

#include "edif/error.hpp"
#include "edif/forcing.hpp"

namespace edif {

namespace {

// f_N plus the exact correction through sigma, as one extra plain stage.
FuncRep corrected(const Condition& p) {
  std::vector<Rational> pins = p.domain();
  PiecewiseBump bump = build_correction(p.pairs(), p.rep, p.N(), pow2(-static_cast<long>(p.N()) - 2), pins);
  return p.rep.with_layer(Layer{{}, false, Rational(0), std::move(bump)});
}

// Smallest relative distance of the new pair's constraints to their bounds;
// negative when some strict inequality fails.
double candidate_margin(const Condition& q, const Rational& d) {
  const long N = static_cast<long>(q.N());
  const double iota = std::ldexp(1.0, -static_cast<int>(N) - 2);
  CorrectabilityReport cr = correctable_check(q.pairs(), q.rep, q.N(), pow2(-N - 2));
  if (!cr.violations.empty() && cr.gaps.empty()) return -1.0;
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& g : cr.gaps) {
    if (g.d0 != d && g.d1 != d) continue;
    margin = std::min(margin, (std::min(g.slack, iota - g.slack) - 4 * g.err) / iota);
  }
  // Every gap must pass, not only the new ones.
  if (!cr.ok()) margin = std::min(margin, -1.0);
  // e - f_N(d) in (0, 2^-N-2 d) up to sign.
  const auto it = std::find_if(q.sigma.begin(), q.sigma.end(), [&](const SigmaPair& s) { return s.d.v == d; });
  Estimate fd = q.rep.f(d);
  double v = to_double(it->e.v - from_double(fd.value));
  double bound = iota * to_double(d);
  double lo = std::min(0.0, bound), hi = std::max(0.0, bound);
  double rel = (std::min(v - lo, hi - v) - 4 * fd.err) / (hi - lo);
  return std::min(margin, rel);
}

}  // namespace

Rational target_root(const Condition& p, const Rational& e) {
  FuncRep star = corrected(p);
  const std::size_t n = star.stages();
  auto fstar = [&](const Rational& x) { return star.f(x, n).value; };
  const double ev = to_double(e);
  // f* is increasing with f*(0) = 0; bracket the root on the side of e.
  Rational lo(0), hi(sgn(e) >= 0 ? 1 : -1);
  for (int i = 0; i < 64 && (sgn(e) >= 0 ? fstar(hi) < ev : fstar(hi) > ev); ++i) {
    lo = hi;
    hi *= 2;
  }
  if (sgn(e) >= 0 ? fstar(hi) < ev : fstar(hi) > ev)
    throw Error(ErrorKind::NoAdmissiblePoint, "target " + format_rational(e) + " outside the reach of f*");
  const Rational tol = pow2(-50);
  while (abs(hi - lo) > tol) {
    Rational mid = (lo + hi) / 2;
    mid.canonicalize();
    bool below = fstar(mid) < ev;
    if ((sgn(e) >= 0) == below) lo = mid;
    else hi = mid;
  }
  Rational root = (lo + hi) / 2;
  root.canonicalize();
  return root;
}

Condition extend_with_target(const Condition& p, const LabeledPoint& e, const PointPool& dpool,
                             const ExtendOptions& opts) {
  for (const auto& s : p.sigma)
    if (s.e.v == e.v) throw Error(ErrorKind::PreconditionViolated, "target " + format_rational(e.v) + " already in the range");

  Rational dhat = target_root(p, e.v);
  std::vector<LabeledPoint> cands = dpool.nearest(dhat, opts.candidates);

  std::optional<Condition> best;
  double best_margin = 0.0;
  std::size_t height_rejects = 0;
  double farthest = 0.0;
  for (const auto& c : cands) {
    farthest = std::max(farthest, std::abs(to_double(c.v - dhat)));
    if (!just_above(c.h, e.h)) {
      ++height_rejects;
      continue;
    }
    bool clash = false;
    for (const auto& s : p.sigma)
      if (s.d.v == c.v || s.d.h == c.h) clash = true;
    if (clash) {
      ++height_rejects;
      continue;
    }
    Condition q = p;
    q.sigma.push_back({c, e});
    q.sort_sigma();
    bool ordered = true;
    for (std::size_t i = 0; i + 1 < q.sigma.size(); ++i)
      if (!(q.sigma[i].e.v < q.sigma[i + 1].e.v)) ordered = false;
    if (!ordered) continue;
    double m = candidate_margin(q, c.v);
    if (m > 0 && (!best || m > best_margin)) {
      best = std::move(q);
      best_margin = m;
    }
  }
  if (!best) {
    if (!cands.empty() && height_rejects == cands.size())
      throw Error(ErrorKind::HeightConflict, "no pool point near " + format_rational(dhat) + " has an admissible height");
    throw Error(ErrorKind::NoAdmissiblePoint, "no admissible pool point within " + std::to_string(farthest) +
                                                  " of the root " + format_rational(dhat) + "; densify the pool there");
  }
  ClauseReport v = validate(*best, opts.validate);
  if (!v.ok()) throw Error(ErrorKind::ValidationFailed, v.first_failure());
  ClauseReport o = leq(*best, p);
  if (!o.ok()) throw Error(ErrorKind::ValidationFailed, "order: " + o.first_failure());
  return *best;
}

}  // namespace edif
