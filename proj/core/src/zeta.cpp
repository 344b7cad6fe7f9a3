#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <set>
#include <sstream>

#include "edif/error.hpp"
#include "edif/forcing.hpp"

namespace edif {

namespace {

// Fractions of a probe radius; denser toward the centre where wells live.
std::vector<double> probe_fractions() {
  std::vector<double> out;
  for (double t : {1.0 - 0x1p-20, 0.875, 0.75, 0.625, 0.5, 0.375, 0.25}) {
    out.push_back(t);
    out.push_back(-t);
  }
  for (int k = 3; k <= 120; ++k) {
    out.push_back(std::ldexp(1.0, -k));
    out.push_back(-std::ldexp(1.0, -k));
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// zeta = 2^-z.
long zeta_exponent(const Rational& zeta) { return -floor_log2(zeta); }

double quarter_root(const Rational& zeta) { return std::pow(2.0, -zeta_exponent(zeta) / 4.0); }

Rational min_range_gap(const Condition& p) {
  std::set<Rational> es;
  for (const auto& s : p.sigma) es.insert(s.e.v);
  Rational best(-1);
  for (auto it = es.begin(); it != es.end() && std::next(it) != es.end(); ++it) {
    Rational g = *std::next(it) - *it;
    if (best < 0 || g < best) best = g;
  }
  return best;
}

}  // namespace

bool ZetaLedger::ok() const {
  return std::all_of(entries.begin(), entries.end(), [](const ZetaEntry& e) { return e.ok; });
}

std::string ZetaLedger::to_json() const {
  nlohmann::json j;
  j["zeta"] = format_rational(zeta);
  j["ok"] = ok();
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries) j["entries"].push_back({{"name", e.name}, {"ok", e.ok}, {"detail", e.detail}});
  return j.dump();
}

std::optional<Rational> mu(const Condition& p) {
  auto dom = p.domain();
  std::sort(dom.begin(), dom.end());
  std::optional<Rational> best;
  for (std::size_t i = 0; i + 1 < dom.size(); ++i) {
    if (dom[i] == dom[i + 1]) continue;
    Rational g = dom[i + 1] - dom[i];
    if (!best || g < *best) best = g;
  }
  return best;
}

namespace {

// Entries with closed forms.
void closed_form_entries(const Condition& p, const Rational& zeta, std::vector<ZetaEntry>& out) {
  const long N = static_cast<long>(p.N());
  const auto m = mu(p);
  const std::size_t L = p.sigma.size();
  auto add = [&](const char* name, bool ok, std::string detail = {}) { out.push_back({name, ok, std::move(detail)}); };

  add("zeta < mu/2", m ? zeta < *m / 2 : zeta <= zeta_cap(), m ? "mu = " + format_rational(*m) : "cap 2^-16");
  Rational eg = min_range_gap(p);
  add("3 zeta^2 < min range gap", eg < 0 || 3 * zeta * zeta < eg);
  add("zeta < 1", zeta < 1);
  add("sqrt(zeta) < 2^-N/256", zeta < pow2(-2 * N - 16));
  // 2 L zeta^(1/8) <= 2^-N-4, raised to the 8th power.
  Rational twoL(static_cast<long>(2 * L));
  Rational lhs = zeta;
  for (int i = 0; i < 8; ++i) lhs *= twoL;
  add("2 L zeta^(1/8) <= 2^-N-4", lhs <= pow2(-8 * N - 32));
  if (m) {
    Rational q = *m / 4;
    add("zeta^(1/4) < mu/4", zeta < q * q * q * q);
  } else {
    add("zeta^(1/4) < mu/4", true, "single point");
  }
}

// Correctability survives the layer change: 4 L sqrt(Delta) zeta^(1/4) bounds
// the drift of f at every domain point from psi, and the same from theta.
void margin_entry(const Condition& p, const Rational& zeta, std::vector<ZetaEntry>& out) {
  const auto m = mu(p);
  if (!m) {
    out.push_back({"correctability margin", true, "single point"});
    return;
  }
  const long N = static_cast<long>(p.N());
  double iota = std::ldexp(1.0, -static_cast<int>(N) - 2);
  CorrectabilityReport cr = correctable_check(p.pairs(), p.rep, p.N(), pow2(-N - 2));
  double min_margin = iota;
  for (const auto& g : cr.gaps) min_margin = std::min({min_margin, g.slack - 4 * g.err, iota - g.slack - 4 * g.err});
  auto dom = p.domain();
  auto [lo, hi] = std::minmax_element(dom.begin(), dom.end());
  double delta = to_double(*hi - *lo);
  double drift = 16.0 * static_cast<double>(p.sigma.size()) * std::sqrt(delta) * quarter_root(zeta);
  double budget = to_double(*m) * min_margin / 4.0;
  out.push_back({"correctability margin", min_margin > 0 && drift < budget,
                 "drift " + fmt(drift) + " vs " + fmt(budget)});
}

// g_N(x) >= g_N(d) - 2^-N-2/16 for |x - d| <= 2 zeta^(1/4).
void lower_modulus_entry(const Condition& p, const Rational& zeta, std::vector<ZetaEntry>& out) {
  const std::size_t N = p.N();
  double radius = 2.0 * quarter_root(zeta);
  double tol = std::ldexp(1.0, -static_cast<int>(N) - 6);
  auto fr = probe_fractions();
  for (const auto& s : p.sigma) {
    Frame f = p.rep.frame(s.d.v);
    Estimate gd = p.rep.g(f, 0.0, N);
    for (double t : fr) {
      Estimate gx = p.rep.g(f, t * radius, N);
      if (gx.value - gx.err < gd.value + gd.err - tol) {
        out.push_back({"lower modulus at 2 zeta^(1/4)", false, "near d = " + format_rational(s.d.v)});
        return;
      }
    }
  }
  out.push_back({"lower modulus at 2 zeta^(1/4)", true});
}

// |g_N(x) - g_N(d)| < 2^-N/256 for |x - d| < 2 zeta.
void modulus_entry(const Condition& p, const Rational& zeta, std::vector<ZetaEntry>& out) {
  const std::size_t N = p.N();
  double radius = 2.0 * to_double(zeta);
  double tol = std::ldexp(1.0, -static_cast<int>(N) - 8);
  auto fr = probe_fractions();
  for (const auto& s : p.sigma) {
    Frame f = p.rep.frame(s.d.v);
    Estimate gd = p.rep.g(f, 0.0, N);
    for (double t : fr) {
      Estimate gx = p.rep.g(f, t * radius, N);
      if (std::abs(gx.value - gd.value) + gx.err + gd.err >= tol) {
        out.push_back({"modulus at 2 zeta", false, "near d = " + format_rational(s.d.v)});
        return;
      }
    }
  }
  out.push_back({"modulus at 2 zeta", true});
}

}  // namespace

ZetaLedger zeta_ledger(const Condition& p, const Rational& zeta) {
  if (sgn(zeta) <= 0) throw Error(ErrorKind::InvalidInput, "zeta must be positive");
  ZetaLedger led{zeta, {}};
  closed_form_entries(p, zeta, led.entries);
  margin_entry(p, zeta, led.entries);
  lower_modulus_entry(p, zeta, led.entries);
  modulus_entry(p, zeta, led.entries);
  return led;
}

Rational compute_zeta(const Condition& p) {
  Rational zeta = zeta_cap();
  auto closed_ok = [&](const Rational& z) {
    std::vector<ZetaEntry> e;
    closed_form_entries(p, z, e);
    return std::all_of(e.begin(), e.end(), [](const ZetaEntry& x) { return x.ok; });
  };
  while (!closed_ok(zeta)) zeta /= 2;
  // The probed entries are monotone in zeta up to sampling, so halve until
  // all pass; 2^-1100 is far below anything double probes can resolve.
  for (int guard = 0; guard < 1100; ++guard) {
    if (zeta_ledger(p, zeta).ok()) return zeta;
    zeta /= 2;
  }
  throw Error(ErrorKind::Indeterminate, "no zeta found above 2^-1100");
}

CloseReport zeta_close(const Condition& p, const Condition& q, const Rational& zeta) {
  auto fail = [](std::string why) { return CloseReport{false, std::move(why)}; };
  if (p.N() != q.N()) return fail("N differs");
  if (p.sigma.size() != q.sigma.size()) return fail("|sigma| differs");
  if (compute_zeta(p) != zeta || compute_zeta(q) != zeta) return fail("zeta(p), zeta(q) and zeta disagree");
  if (!layers_equal(p.rep, q.rep, p.N())) return fail("layer histories differ");

  // Distinct domain elements carry distinct heights.
  std::vector<LabeledPoint> dom;
  for (const auto* c : {&p, &q})
    for (const auto& s : c->sigma) {
      bool seen = false;
      for (const auto& x : dom) {
        if (x.v == s.d.v) {
          if (x.h != s.d.h) return fail("one domain value with two heights");
          seen = true;
        } else if (x.h == s.d.h) {
          return fail("repeated height in the joint domain");
        }
      }
      if (!seen) dom.push_back(s.d);
    }

  // zeta < mu/2 makes the partner unique, and both lists are sorted, so the
  // partner of the i-th pair of p is the i-th pair of q.
  for (std::size_t i = 0; i < p.sigma.size(); ++i) {
    const auto& a = p.sigma[i];
    const auto& b = q.sigma[i];
    if (!(abs(a.d.v - b.d.v) < zeta)) return fail("no partner within zeta for d = " + format_rational(a.d.v));
    if (a.d.v == b.d.v) {
      if (a.e != b.e) return fail("same d with different e at " + format_rational(a.d.v));
    } else {
      Rational slope = (a.e.v - b.e.v) / (a.d.v - b.d.v);
      if (!(sgn(slope) > 0 && slope < zeta)) return fail("cross slope outside (0, zeta) at d = " + format_rational(a.d.v));
    }
  }
  return {true, {}};
}

}  // namespace edif
