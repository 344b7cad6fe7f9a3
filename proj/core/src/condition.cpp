#include "edif/condition.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <set>

#include "edif/average_property.hpp"
#include "edif/error.hpp"

namespace edif {

// ---------------------------------------------------------------- Condition

Condition Condition::trivial() {
  Condition c;
  c.sigma.push_back({{Rational(0), {0, 0}}, {Rational(0), {0, 0}}});
  return c;
}

PairList Condition::pairs() const {
  PairList out;
  for (const auto& s : sigma) out.emplace_back(s.d.v, s.e.v);
  return out;
}

std::vector<Rational> Condition::domain() const {
  std::vector<Rational> out;
  for (const auto& s : sigma) out.push_back(s.d.v);
  return out;
}

void Condition::sort_sigma() {
  std::sort(sigma.begin(), sigma.end(), [](const SigmaPair& a, const SigmaPair& b) { return a.d.v < b.d.v; });
}

const char* to_string(ClauseStatus s) {
  switch (s) {
    case ClauseStatus::Pass: return "pass";
    case ClauseStatus::Fail: return "fail";
    case ClauseStatus::Indeterminate: return "indeterminate";
  }
  return "?";
}

bool ClauseReport::ok() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const ClauseResult& c) { return c.status == ClauseStatus::Pass; });
}

bool ClauseReport::indeterminate() const {
  bool any_fail = std::any_of(clauses.begin(), clauses.end(), [](const ClauseResult& c) { return c.status == ClauseStatus::Fail; });
  bool any_ind = std::any_of(clauses.begin(), clauses.end(),
                             [](const ClauseResult& c) { return c.status == ClauseStatus::Indeterminate; });
  return !any_fail && any_ind;
}

std::string ClauseReport::first_failure() const {
  for (const auto& c : clauses)
    if (c.status != ClauseStatus::Pass) return c.clause + ": " + c.detail;
  return {};
}

void ClauseReport::add(std::string clause, ClauseStatus status, std::string detail) {
  clauses.push_back({std::move(clause), status, std::move(detail)});
}

std::string ClauseReport::to_json() const {
  nlohmann::json j;
  j["ok"] = ok();
  j["indeterminate"] = indeterminate();
  j["clauses"] = nlohmann::json::array();
  for (const auto& c : clauses)
    j["clauses"].push_back({{"clause", c.clause}, {"status", to_string(c.status)}, {"detail", c.detail}});
  return j.dump();
}

// ---------------------------------------------------------------- pools

ListPool::ListPool(std::vector<LabeledPoint> pts) : pts_(std::move(pts)) {
  std::sort(pts_.begin(), pts_.end(), [](const LabeledPoint& a, const LabeledPoint& b) { return a.v < b.v; });
}

bool ListPool::contains(const LabeledPoint& p) const {
  auto it = std::lower_bound(pts_.begin(), pts_.end(), p.v, [](const LabeledPoint& a, const Rational& v) { return a.v < v; });
  for (; it != pts_.end() && it->v == p.v; ++it)
    if (it->h == p.h) return true;
  return false;
}

std::vector<LabeledPoint> ListPool::nearest(const Rational& x, std::size_t count) const {
  auto mid = std::lower_bound(pts_.begin(), pts_.end(), x, [](const LabeledPoint& a, const Rational& v) { return a.v < v; });
  std::vector<LabeledPoint> out;
  auto lo = mid, hi = mid;
  while (out.size() < count && (lo != pts_.begin() || hi != pts_.end())) {
    bool take_hi;
    if (lo == pts_.begin()) take_hi = true;
    else if (hi == pts_.end()) take_hi = false;
    else take_hi = abs(hi->v - x) <= abs(std::prev(lo)->v - x);
    if (take_hi) out.push_back(*hi++);
    else out.push_back(*--lo);
  }
  return out;
}

GridPool::GridPool(Rational lo, Rational hi, long step_log2, std::uint64_t limit, std::uint64_t base,
                   std::uint64_t modulus)
    : lo_(std::move(lo)), hi_(std::move(hi)), step_(pow2(step_log2)), step_log2_(step_log2), limit_(limit),
      base_(base), modulus_(modulus) {
  if (!(lo_ <= hi_)) throw Error(ErrorKind::InvalidInput, "grid pool needs lo <= hi");
  if (modulus_ == 0) throw Error(ErrorKind::InvalidInput, "grid pool height modulus must be positive");
  Rational span = (hi_ - lo_) / step_;
  count_ = span.get_num() / span.get_den() + 1;
}

std::size_t GridPool::size() const { return count_.fits_ulong_p() ? count_.get_ui() : SIZE_MAX; }

LabeledPoint GridPool::at(const BigInt& i) const {
  BigInt r = i % BigInt(static_cast<unsigned long>(modulus_));
  Rational v = lo_ + Rational(i) * step_;
  v.canonicalize();
  return {v, {limit_, base_ + r.get_ui()}};
}

bool GridPool::contains(const LabeledPoint& p) const {
  if (p.v < lo_ || p.v > hi_) return false;
  Rational k = (p.v - lo_) / step_;
  k.canonicalize();
  if (k.get_den() != 1) return false;
  return at(k.get_num()).h == p.h;
}

std::vector<LabeledPoint> GridPool::nearest(const Rational& x, std::size_t count) const {
  Rational k = (x - lo_) / step_;
  BigInt i0 = k.get_num() / k.get_den();  // truncates toward zero
  if (sgn(k) < 0) i0 = 0;
  if (i0 >= count_) i0 = count_ - 1;
  std::vector<LabeledPoint> out;
  BigInt lo = i0, hi = i0 + 1;
  while (out.size() < count && (lo >= 0 || hi < count_)) {
    bool take_hi;
    if (lo < 0) take_hi = true;
    else if (hi >= count_) take_hi = false;
    else take_hi = abs(at(hi).v - x) < abs(at(lo).v - x);
    if (take_hi) out.push_back(at(hi++));
    else out.push_back(at(lo--));
  }
  return out;
}

// ---------------------------------------------------------------- validate

namespace {

bool is_origin(const SigmaPair& s) { return sgn(s.d.v) == 0 && sgn(s.e.v) == 0; }

// Probe offsets around each anchor: geometric toward the anchor.
std::vector<double> probe_offsets() {
  std::vector<double> out;
  for (int k = 0; k <= 240; k += 3) {
    out.push_back(std::ldexp(1.0, -k));
    out.push_back(-std::ldexp(1.0, -k));
    out.push_back(std::ldexp(1.5, -k));
    out.push_back(-std::ldexp(1.5, -k));
  }
  return out;
}

ClauseStatus strict_between(double v, double err, double lo, double hi) {
  double m = 4.0 * err;
  if (v - m > lo && v + m < hi) return ClauseStatus::Pass;
  if (v + m <= lo || v - m >= hi) return ClauseStatus::Fail;
  return ClauseStatus::Indeterminate;
}

RealFunction layer_in_frame(const FuncRep& rep, std::size_t n, const Frame& fr) {
  RealFunction f;
  f.value = [&rep, n, fr](double u) { return rep.psi_at(n, fr, u); };
  f.integral = [&rep, n, fr](double lo, double hi) { return rep.psi_span(n, fr, lo, hi); };
  f.name = "psi_" + std::to_string(n);
  return f;
}

}  // namespace

ClauseReport validate(const Condition& p, const ValidateOptions& opts) {
  ClauseReport rep;
  const FuncRep& fr = p.rep;
  const std::size_t N = p.N();

  // P1
  {
    bool origin = std::any_of(p.sigma.begin(), p.sigma.end(), is_origin);
    std::string why = origin ? "" : "(0,0) missing";
    for (const auto& s : p.sigma) {
      if (is_origin(s)) continue;
      if (opts.dpool && !opts.dpool->contains(s.d)) why = "d = " + format_rational(s.d.v) + " not in the D pool";
      if (opts.epool && !opts.epool->contains(s.e)) why = "e = " + format_rational(s.e.v) + " not in the E pool";
    }
    rep.add("P1", why.empty() ? ClauseStatus::Pass : ClauseStatus::Fail, why);
  }
  // P2
  {
    std::string why;
    for (std::size_t i = 0; i + 1 < p.sigma.size(); ++i) {
      if (!(p.sigma[i].d.v < p.sigma[i + 1].d.v)) why = "domain not strictly increasing";
      else if (!(p.sigma[i].e.v < p.sigma[i + 1].e.v))
        why = "not order preserving at d = " + format_rational(p.sigma[i + 1].d.v);
    }
    rep.add("P2", why.empty() ? ClauseStatus::Pass : ClauseStatus::Fail, why);
  }
  // P3, P4
  {
    std::string why3, why4;
    for (const auto& s : p.sigma)
      if (!is_origin(s) && !just_above(s.d.h, s.e.h)) why3 = "height of d = " + format_rational(s.d.v) + " not just above e";
    for (std::size_t i = 0; i < p.sigma.size(); ++i)
      for (std::size_t j = i + 1; j < p.sigma.size(); ++j)
        if (p.sigma[i].d.v != p.sigma[j].d.v && p.sigma[i].d.h == p.sigma[j].d.h)
          why4 = "repeated height at d = " + format_rational(p.sigma[j].d.v);
    rep.add("P3", why3.empty() ? ClauseStatus::Pass : ClauseStatus::Fail, why3);
    rep.add("P4", why4.empty() ? ClauseStatus::Pass : ClauseStatus::Fail, why4);
  }
  rep.add("P5", ClauseStatus::Pass);
  // P6: every layer parameter is an exact rational by construction; check
  // that kernel rates and amplitudes are admissible.
  {
    std::string why;
    for (const auto& L : fr.layers())
      for (const auto& k : L.psi)
        if (sgn(k.c()) < 0 || sgn(k.r()) <= 0) why = "inadmissible kernel parameters";
    rep.add("P6", why.empty() ? ClauseStatus::Pass : ClauseStatus::Fail, why);
  }
  // P7
  {
    ClauseStatus st = ClauseStatus::Pass;
    std::string why;
    auto offsets = probe_offsets();
    std::size_t first = opts.probe_all_stages ? 0 : N;
    for (std::size_t n = first; n <= N && st != ClauseStatus::Fail; ++n) {
      Rational cap = 2 - pow2(-static_cast<long>(n));
      Rational bound = fr.sup_norm_bound(n);
      if (bound > cap) {
        st = ClauseStatus::Fail;
        why = "sup bound " + format_rational(bound) + " exceeds 2 - 2^-" + std::to_string(n);
        break;
      }
      Rational lim = fr.limit_at_infinity(n);
      if (lim < 1 || lim > cap) {
        st = ClauseStatus::Fail;
        why = "limit at infinity " + format_rational(lim) + " outside [1, 2 - 2^-n]";
        break;
      }
      if (fr.g(Rational(0), n).value != 0.0) {
        st = ClauseStatus::Fail;
        why = "g_" + std::to_string(n) + "(0) != 0";
        break;
      }
      double bound_d = to_double(bound);
      for (std::size_t a = 0; a < fr.anchors().size() && st != ClauseStatus::Fail; ++a) {
        Frame f = fr.frame(fr.anchors()[a]);
        for (double u : offsets) {
          if (fr.anchors()[a] + from_double(u) == 0) continue;  // the zero of g
          Estimate v = fr.g(f, u, n);
          if (v.value > bound_d + v.err || v.value + v.err <= 0 || v.value <= 0) {
            st = ClauseStatus::Fail;
            why = "g_" + std::to_string(n) + " = " + std::to_string(v.value) + " near " + format_rational(fr.anchors()[a]);
            break;
          }
          if (v.value <= 4 * v.err && st == ClauseStatus::Pass) {
            st = ClauseStatus::Indeterminate;
            why = "positivity below error bound";
          }
        }
      }
      for (int i = -160; i <= 160 && st != ClauseStatus::Fail; ++i) {
        if (i == 0) continue;
        double x = i / 16.0;
        double v = fr.g_at(x, n);
        if (!(v > 0) || v > bound_d) {
          st = ClauseStatus::Fail;
          why = "g_" + std::to_string(n) + "(" + std::to_string(x) + ") = " + std::to_string(v);
        }
      }
    }
    rep.add("P7", st, why);
  }
  // P8, P9: f is the closed-form antiderivative and layers follow the recurrence by construction.
  rep.add("P8", fr.f(Rational(0)).value == 0.0 ? ClauseStatus::Pass : ClauseStatus::Fail);
  rep.add("P9", ClauseStatus::Pass);
  // P10
  {
    std::string why;
    for (std::size_t n = 0; n < N && why.empty(); ++n) {
      const auto& L = fr.layers()[n];
      std::set<Rational> centers;
      for (const auto& k : L.psi) centers.insert(k.a());
      if (centers.empty()) continue;
      std::size_t per = std::max<std::size_t>(64, opts.ap_pairs / centers.size());
      for (const auto& c : centers) {
        Frame f = fr.frame(c);
        RealFunction psi = layer_in_frame(fr, n, f);
        PairSampler sampler(opts.seed + n, per, -40.0, 6.0, {0.0});
        APReport r = check_ap(psi, 4.0, sampler.pairs());
        if (!r.ok()) {
          why = "psi_" + std::to_string(n) + " violates AP_4 near " + format_rational(c) + " (ratio " +
                std::to_string(r.worst_ratio) + ")";
          break;
        }
      }
    }
    rep.add("P10", why.empty() ? ClauseStatus::Pass : ClauseStatus::Fail, why);
  }
  // P11
  {
    ClauseStatus st = ClauseStatus::Pass;
    std::string why;
    for (std::size_t n = 0; n < N; ++n) {
      double est = fr.theta_norm_estimate(n);
      double cap = std::ldexp(1.0, -static_cast<int>(n) - 1);
      if (est > cap) {
        st = ClauseStatus::Fail;
        why = "||theta_" + std::to_string(n) + "|| ~ " + std::to_string(est);
        break;
      }
      if (est > cap * (1 - 1e-9)) st = ClauseStatus::Indeterminate;
    }
    rep.add("P11", st, why);
  }
  // P12
  {
    ClauseStatus st = ClauseStatus::Pass;
    std::string why;
    double scale = std::ldexp(1.0, -static_cast<int>(N) - 2);
    for (const auto& s : p.sigma) {
      if (is_origin(s)) continue;
      int sd = sgn(s.d.v), se = sgn(s.e.v);
      if (sd != se) continue;  // excluded by P2
      Estimate fd = fr.f(s.d.v);
      double v = to_double(s.e.v - from_double(fd.value));
      double d = to_double(s.d.v);
      ClauseStatus c = sd > 0 ? strict_between(v, fd.err, 0.0, scale * d) : strict_between(v, fd.err, scale * d, 0.0);
      if (c == ClauseStatus::Fail || (c == ClauseStatus::Indeterminate && st == ClauseStatus::Pass)) {
        st = c;
        why = "e - f_N(d) = " + std::to_string(v) + " at d = " + format_rational(s.d.v);
      }
      if (st == ClauseStatus::Fail) break;
    }
    rep.add("P12", st, why);
  }
  // P13
  {
    CorrectabilityReport cr = correctable_check(p.pairs(), fr, N, pow2(-static_cast<long>(N) - 2));
    ClauseStatus st = ClauseStatus::Pass;
    std::string why;
    if (!cr.violations.empty()) {
      st = ClauseStatus::Fail;
      why = cr.violations.front();
    } else if (cr.indeterminate) {
      st = ClauseStatus::Indeterminate;
      why = "slack within error bound";
    }
    rep.add("P13", st, why);
  }
  return rep;
}

bool layers_equal(const FuncRep& a, const FuncRep& b, std::size_t n) {
  if (a.kappa() != b.kappa() || a.constant() != b.constant()) return false;
  if (a.stages() < n || b.stages() < n) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Layer& x = a.layers()[i];
    const Layer& y = b.layers()[i];
    if (x.psi != y.psi || x.clipped != y.clipped || x.eps != y.eps) return false;
    if (x.bump.height() != y.bump.height() || x.bump.pieces().size() != y.bump.pieces().size()) return false;
    for (std::size_t k = 0; k < x.bump.pieces().size(); ++k) {
      const auto& px = x.bump.pieces()[k];
      const auto& py = y.bump.pieces()[k];
      if (px.x0 != py.x0 || px.x1 != py.x1 || px.coeffs != py.coeffs) return false;
    }
  }
  return true;
}

ClauseReport leq(const Condition& q, const Condition& p) {
  ClauseReport rep;
  {
    std::string why;
    for (const auto& s : p.sigma)
      if (std::find(q.sigma.begin(), q.sigma.end(), s) == q.sigma.end())
        why = "pair at d = " + format_rational(s.d.v) + " dropped";
    if (q.N() < p.N()) why = "N decreased";
    rep.add("Q1", why.empty() ? ClauseStatus::Pass : ClauseStatus::Fail, why);
  }
  rep.add("Q2", layers_equal(q.rep, p.rep, p.N()) ? ClauseStatus::Pass : ClauseStatus::Fail,
          layers_equal(q.rep, p.rep, p.N()) ? "" : "layers below N^p differ");
  {
    ClauseStatus st = ClauseStatus::Pass;
    std::string why;
    for (const auto& s : p.sigma) {
      if (is_origin(s)) continue;
      for (std::size_t n = p.N() + 1; n <= q.N(); ++n) {
        Estimate v = q.rep.g(s.d.v, n);
        ClauseStatus c = strict_between(v.value, v.err, 0.0, std::ldexp(1.0, -static_cast<int>(n)));
        if (c == ClauseStatus::Fail || (c == ClauseStatus::Indeterminate && st == ClauseStatus::Pass)) {
          st = c;
          why = "g_" + std::to_string(n) + "(" + format_rational(s.d.v) + ") = " + std::to_string(v.value);
        }
      }
    }
    rep.add("Q3", st, why);
  }
  return rep;
}

}  // namespace edif
