#include "edif/d_check.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <memory>
#include <random>

#include "edif/error.hpp"
#include "edif/quadrature.hpp"

namespace edif {

std::string DerivativeReport::to_json() const {
  nlohmann::json j{{"g_x", g_x}, {"h", hs}, {"quotient", quotients}, {"gap", gaps}, {"err", errs},
                   {"monotone", monotone}, {"final_gap", final_gap()}};
  return j.dump();
}

DerivativeReport derivative_check(const FuncRep& rep, const Rational& x, const std::vector<double>& hs,
                                  std::size_t stage) {
  DerivativeReport r;
  Frame fr = rep.frame(x);
  Estimate gx = rep.g(fr, 0.0, stage);
  r.g_x = gx.value;
  for (double h : hs) {
    if (h == 0) throw Error(ErrorKind::InvalidInput, "difference quotient with h = 0");
    Estimate inc = rep.local_increment(fr, 0.0, h, stage);
    double q = inc.value / h;
    r.hs.push_back(h);
    r.quotients.push_back(q);
    r.gaps.push_back(std::fabs(q - gx.value));
    r.errs.push_back(inc.err / std::fabs(h) + gx.err);
  }
  for (std::size_t i = 1; i < r.gaps.size(); ++i)
    if (r.gaps[i] > r.gaps[i - 1] + r.errs[i] + r.errs[i - 1]) r.monotone = false;
  return r;
}

std::string DCheckReport::to_json() const {
  nlohmann::json j{{"g_x", g_x},         {"m", m},           {"delta", delta},
                   {"eps", eps},         {"C", C},           {"samples", samples},
                   {"min_av", min_av},   {"max_av", max_av}, {"violations", violating_h.size()},
                   {"ok", ok()}};
  return j.dump();
}

DCheckReport finite_stage_D_check(const std::vector<SummandView>& psis, double eps, double C, std::size_t samples,
                                  std::uint64_t seed) {
  if (!(eps > 0)) throw Error(ErrorKind::InvalidInput, "eps must be positive");
  DCheckReport r;
  r.eps = eps;
  r.C = C;
  std::vector<double> at_x;
  for (const auto& p : psis) at_x.push_back(p.value(0.0));
  double total = 0.0;
  for (double v : at_x) total += v;
  r.g_x = total;

  // Smallest m with sum_{j<m} psi_j(x) >= g(x) - eps.
  bool found = false;
  double partial = 0.0;
  for (std::size_t m = 0; m <= psis.size(); ++m) {
    if (partial >= total - eps) {
      r.m = m;
      found = true;
      break;
    }
    if (m < psis.size()) partial += at_x[m];
  }
  if (!found) throw Error(ErrorKind::StageNotFound, "no stage reaches g(x) - eps");

  auto partial_at = [&](double h) {
    double v = 0.0;
    for (std::size_t j = 0; j < r.m; ++j) v += psis[j].value(h);
    return v;
  };
  // Largest delta = 2^-k whose probes keep the partial sum within eps.
  double base = partial_at(0.0);
  for (int k = 0; k <= 400; ++k) {
    double d = std::ldexp(1.0, -k);
    bool good = true;
    for (int s : {-1, 1}) {
      for (int i = 1; good && i <= 16; ++i) good = std::fabs(partial_at(s * d * i / 16.0) - base) <= eps;
      for (int i = 5; good && i <= 60; ++i) good = std::fabs(partial_at(s * std::ldexp(d, -i)) - base) <= eps;
    }
    if (good) {
      r.delta = d;
      break;
    }
  }
  if (r.delta == 0) return r;

  std::mt19937_64 rng(seed);
  r.min_av = INFINITY;
  r.max_av = -INFINITY;
  double lo = total - 2 * eps, hi = total + (C + 1) * eps;
  for (std::size_t n = 0; n < samples; ++n) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double h = r.delta * std::exp2(-60.0 * u) * ((rng() & 1) ? 1.0 : -1.0);
    if (std::fabs(h) >= r.delta) h *= 0.5;
    double integ = 0.0;
    for (const auto& p : psis) integ += p.integral(h);
    double av = integ / h;
    r.min_av = std::min(r.min_av, av);
    r.max_av = std::max(r.max_av, av);
    double tol = 1e-12 * (std::fabs(total) + 1.0);
    if (av < lo - tol || av > hi + tol) r.violating_h.push_back(h);
    ++r.samples;
  }
  return r;
}

DCheckReport finite_stage_D_check(const FuncRep& rep, const Rational& x, double eps, double C, std::size_t samples,
                                  std::uint64_t seed) {
  auto fr = std::make_shared<Frame>(rep.frame(x));
  std::vector<SummandView> views;
  for (std::size_t n = 0; n < rep.stages(); ++n) {
    views.push_back({[&rep, fr, n](double h) { return rep.psi_at(n, *fr, h); },
                     [&rep, fr, n](double h) { return rep.psi_span(n, *fr, 0.0, h); }});
  }
  return finite_stage_D_check(views, eps, C, samples, seed);
}

std::vector<SummandView> views_at(const std::vector<RealFunction>& psis, double x) {
  std::vector<SummandView> out;
  for (const auto& p : psis) {
    out.push_back({[p, x](double h) { return p(x + h); },
                   [p, x](double h) {
                     // x + h loses h when it is tiny next to x; integrate over the offset instead.
                     if (std::fabs(h) < 1e-4 * std::max(1.0, std::fabs(x)))
                       return gauss_kronrod15([&p, x](double t) { return p(x + t); }, 0.0, h).value;
                     if (p.integral) return p.integral(x, x + h);
                     return average(p, x, x + h).value * h;
                   }});
  }
  return out;
}

}  // namespace edif
