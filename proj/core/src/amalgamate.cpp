#include <algorithm>
#include <cmath>

#include "edif/error.hpp"
#include "edif/forcing.hpp"

namespace edif {

namespace {

// r strictly inside (1/sqrt(zeta), 2/sqrt(zeta)) for zeta = 2^-z.
Rational kernel_rate(const Rational& zeta) {
  long z = -floor_log2(zeta);
  if (z % 2 == 0) return Rational(3, 2) * pow2(z / 2);
  return pow2((z + 1) / 2);
}

// Dyadic gamma with gamma_bar < gamma < gamma_bar + 2^-N/256, above the
// evaluation error of gamma_bar.
Rational kernel_level(double gamma_bar, double err, long N) {
  double target = gamma_bar + err + std::ldexp(1.0, -static_cast<int>(N) - 10);
  Rational scaled = from_double(target) * pow2(N + 12);
  BigInt c = scaled.get_num() / scaled.get_den();
  if (Rational(c) < scaled) c += 1;
  return Rational(c) * pow2(-N - 12);
}

// Largest power of 2 with eps <= 2^-N-4, below a quarter of every adjacent
// lower slack of both parents, and with eps (d_b - d_a) < e_b - e_a across
// partner pairs.
Rational choose_eps(const Condition& p, const Condition& q, long N) {
  Rational eps = pow2(-N - 4);
  double min_slack = std::ldexp(1.0, -static_cast<int>(N) - 2);
  for (const auto* c : {&p, &q}) {
    CorrectabilityReport cr = correctable_check(c->pairs(), c->rep, c->N(), pow2(-N - 2));
    for (const auto& g : cr.gaps) min_slack = std::min(min_slack, g.slack - 4 * g.err);
  }
  if (!(min_slack > 0)) throw Error(ErrorKind::ValidationFailed, "a parent has no positive correctability slack");
  while (to_double(eps) > min_slack / 4) eps /= 2;
  for (std::size_t i = 0; i < p.sigma.size(); ++i) {
    const auto& a = p.sigma[i];
    const auto& b = q.sigma[i];
    if (a.d.v == b.d.v) continue;
    Rational dd = abs(b.d.v - a.d.v), de = abs(b.e.v - a.e.v);
    while (!(eps * dd < de)) eps /= 2;
  }
  return eps;
}

}  // namespace

Condition amalgamate(const Condition& p, const Condition& q, const Rational& zeta, const AmalgamateOptions& opts) {
  CloseReport close = zeta_close(p, q, zeta);
  if (!close.ok) throw Error(ErrorKind::NotClose, close.reason);
  const long N = static_cast<long>(p.N());
  const FuncRep& rep = p.rep;

  Condition s;
  s.sigma = p.sigma;
  for (const auto& x : q.sigma)
    if (std::find(s.sigma.begin(), s.sigma.end(), x) == s.sigma.end()) s.sigma.push_back(x);
  s.sort_sigma();

  // Stage-N kernels, one per partner pair.
  Rational r = kernel_rate(zeta);
  Rational lift = pow2(-N - 4);
  KernelSum psi;
  for (std::size_t i = 0; i < p.sigma.size(); ++i) {
    const Rational& dp = p.sigma[i].d.v;
    const Rational& dq = q.sigma[i].d.v;
    Rational center = dp == dq ? dp : Rational((dp + dq) / 2);
    center.canonicalize();
    double gbar = 0.0, err = 0.0;
    for (const Rational* x : std::initializer_list<const Rational*>{&dp, &dq, &center}) {
      Estimate v = rep.g(*x, p.N());
      if (v.value > gbar) gbar = v.value;
      err = std::max(err, v.err);
    }
    Rational gamma = kernel_level(gbar, err, N);
    if (!(gamma < 2 - pow2(-N)))
      throw Error(ErrorKind::ValidationFailed, "kernel level reaches 2 - 2^-N at " + format_rational(center));
    psi.emplace_back(gamma + lift, r, center);
  }

  Rational eps = choose_eps(p, q, N);
  FuncRep dagger = rep.with_layer(Layer{psi, true, eps, {}});

  // Leave most of every gap mass uncorrected, capped so the slope slack lands
  // in (0, 2^-(N+1)-2) at the new stage. Keeping it large leaves later
  // extensions a wide window around their roots.
  const std::optional<Rational> cap = opts.residual_cap;
  MassShave residual = [N, cap](const Rational& m, const Rational& gap) {
    Rational res = std::min<Rational>(m * Rational(15, 16), pow2(-N - 4) * gap);
    if (cap) res = std::min<Rational>(res, *cap * gap);
    res.canonicalize();
    return res;
  };
  std::vector<Rational> pins;
  for (const auto& x : s.sigma) pins.push_back(x.d.v);
  PiecewiseBump bump = build_correction(s.pairs(), dagger, dagger.stages(), pow2(-N - 2), pins, residual);

  s.rep = dagger.with_last_bump(std::move(bump));
  s.meta.zeta = zeta;
  s.meta.eps = eps;
  s.meta.seed = opts.seed;

  ClauseReport v = validate(s, opts.validate);
  if (!v.ok()) throw Error(ErrorKind::ValidationFailed, v.first_failure());
  for (const auto* parent : {&p, &q}) {
    ClauseReport o = leq(s, *parent);
    if (!o.ok()) throw Error(ErrorKind::ValidationFailed, "order: " + o.first_failure());
  }
  return s;
}

Condition advance(const Condition& p, const AmalgamateOptions& opts) { return amalgamate(p, p, compute_zeta(p), opts); }

}  // namespace edif
