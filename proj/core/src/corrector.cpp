#include "edif/corrector.hpp"

#include <algorithm>
#include <json.hpp>

#include "edif/error.hpp"

namespace edif {

namespace {

PairList sorted_pairs(const PairList& tau) {
  PairList s = tau;
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return s;
}

const char* verdict_name(GapCheck::Verdict v) {
  switch (v) {
    case GapCheck::Verdict::Pass: return "pass";
    case GapCheck::Verdict::Fail: return "fail";
    case GapCheck::Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

// Appends the C^1 profile of height h on [x0, x1] with ramps of width w.
void append_shape(std::vector<BumpPiece>& out, const Rational& x0, const Rational& x1, const Rational& h,
                  const Rational& w) {
  Rational w2 = w * w, w3 = w2 * w;
  Rational up2 = 3 * h / w2, up3 = -2 * h / w3;
  out.push_back({x0, x0 + w, {Rational(0), Rational(0), up2, up3}});
  Rational p0 = x0 + w, p1 = x1 - w;
  if (p0 < p1) out.push_back({p0, p1, {h}});
  out.push_back({p1, x1, {h, Rational(0), -up2, -up3}});
  for (auto& piece : out)
    for (auto& c : piece.coeffs) c.canonicalize();
}

}  // namespace

std::string CorrectabilityReport::to_json() const {
  nlohmann::json j;
  j["ok"] = ok();
  j["indeterminate"] = indeterminate;
  j["all_pairs_ok"] = all_pairs_ok;
  j["violations"] = violations;
  j["gaps"] = nlohmann::json::array();
  for (const auto& g : gaps)
    j["gaps"].push_back({{"d0", format_rational(g.d0)},
                         {"d1", format_rational(g.d1)},
                         {"slack", g.slack},
                         {"err", g.err},
                         {"mass", format_rational(g.mass)},
                         {"verdict", verdict_name(g.verdict)}});
  return j.dump();
}

CorrectabilityReport correctable_check(const PairList& tau, const FuncRep& rep, std::size_t stage,
                                       const Rational& iota) {
  CorrectabilityReport rep_out;
  if (sgn(iota) <= 0) rep_out.violations.push_back("iota must be positive");
  PairList s = sorted_pairs(tau);
  bool has_origin = std::any_of(s.begin(), s.end(), [](const auto& p) { return sgn(p.first) == 0 && sgn(p.second) == 0; });
  if (!has_origin) rep_out.violations.push_back("tau must contain (0,0)");
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (!(s[i].first < s[i + 1].first) || !(s[i].second < s[i + 1].second))
      rep_out.violations.push_back("tau is not an order-preserving bijection at " + format_rational(s[i + 1].first));
  if (!rep_out.violations.empty()) return rep_out;

  double iota_d = to_double(iota);
  std::vector<Rational> masses;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const auto& [d0, e0] = s[i];
    const auto& [d1, e1] = s[i + 1];
    Rational gap = d1 - d0;
    Estimate inc = rep.increment(d0, d1, stage);
    GapCheck gc{d0, d1, 0.0, 0.0, Rational(0), GapCheck::Verdict::Pass};
    gc.mass = (e1 - e0) - from_double(inc.value);
    double gap_d = to_double(gap);
    gc.slack = to_double(gc.mass / gap);
    gc.err = inc.err / gap_d;
    double margin = 4.0 * gc.err;
    if (gc.slack + margin <= 0 || gc.slack - margin >= iota_d) {
      gc.verdict = GapCheck::Verdict::Fail;
      rep_out.violations.push_back("slack " + std::to_string(gc.slack) + " outside (0, iota) on [" +
                                   format_rational(d0) + ", " + format_rational(d1) + "]");
    } else if (gc.slack - margin <= 0 || gc.slack + margin >= iota_d) {
      gc.verdict = GapCheck::Verdict::Indeterminate;
      rep_out.indeterminate = true;
    }
    masses.push_back(gc.mass);
    rep_out.gaps.push_back(std::move(gc));
  }
  // Adjacent slack implies slack for every pair: a pair slack is the
  // gap-weighted mean of the adjacent ones. Confirmed exactly.
  bool adjacent_pass = std::all_of(rep_out.gaps.begin(), rep_out.gaps.end(),
                                   [](const GapCheck& g) { return g.verdict == GapCheck::Verdict::Pass; });
  for (std::size_t i = 0; adjacent_pass && i < s.size(); ++i) {
    Rational acc = 0;
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      acc += masses[j - 1];
      Rational slope = acc / (s[j].first - s[i].first);
      if (sgn(slope) <= 0 || slope >= iota) rep_out.all_pairs_ok = false;
    }
  }
  if (!rep_out.all_pairs_ok) rep_out.violations.push_back("telescoping failed");
  return rep_out;
}

PiecewiseBump build_bump(const MassPlan& plan) {
  if (sgn(plan.iota) <= 0) throw Error(ErrorKind::InvalidInput, "iota must be positive");
  if (plan.masses.size() + 1 != plan.nodes.size() && !(plan.nodes.empty() && plan.masses.empty()))
    throw Error(ErrorKind::InvalidInput, "need one mass per gap");
  const Rational rho_frac = pin_exclusion_fraction();
  const Rational near_cap = plan.iota * (1 - pow2(-8));
  std::vector<BumpPiece> pieces;
  std::vector<Rational> pins = plan.nodes;
  pins.insert(pins.end(), plan.pins.begin(), plan.pins.end());
  Rational height = 0;

  for (std::size_t g = 0; g < plan.masses.size(); ++g) {
    const Rational& d0 = plan.nodes[g];
    const Rational& d1 = plan.nodes[g + 1];
    const Rational& m = plan.masses[g];
    if (!(d0 < d1)) throw Error(ErrorKind::InvalidInput, "nodes must be strictly increasing");
    if (sgn(m) <= 0 || m >= plan.iota * (d1 - d0))
      throw Error(ErrorKind::MassOutOfRange, "mass " + format_rational(m) + " not in (0, iota*gap) on [" +
                                                 format_rational(d0) + ", " + format_rational(d1) + "]");
    // Interior pins split the gap; mass is shared in proportion to usable width.
    std::vector<Rational> cuts{d0};
    for (const auto& p : plan.pins)
      if (d0 < p && p < d1) cuts.push_back(p);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(d1);
    std::vector<Rational> usable;
    Rational total_w = 0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      Rational len = cuts[c + 1] - cuts[c];
      if (sgn(len) <= 0) throw Error(ErrorKind::PinnedPointConflict, "zero-width region between pins");
      usable.push_back(len * (1 - 2 * rho_frac));
      total_w += usable.back();
    }
    Rational ratio = m / total_w;  // common mass per unit usable width
    if (ratio >= plan.iota)
      throw Error(ErrorKind::MassOutOfRange, "mass exceeds iota times the width left by pin exclusions");
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      Rational len = cuts[c + 1] - cuts[c];
      Rational x0 = cuts[c] + rho_frac * len, x1 = cuts[c + 1] - rho_frac * len;
      const Rational& W = usable[c];
      Rational h, w;
      if (2 * ratio < near_cap) {
        h = 2 * ratio;
        w = W / 2;
      } else {
        h = (ratio + plan.iota) / 2;
        w = W - ratio * W / h;
      }
      h.canonicalize();
      w.canonicalize();
      std::vector<BumpPiece> local;
      append_shape(local, x0, x1, h, w);
      pieces.insert(pieces.end(), local.begin(), local.end());
      height = std::max(height, h);
    }
  }
  return PiecewiseBump(std::move(pieces), std::move(pins), height);
}

PiecewiseBump build_correction(const PairList& tau, const FuncRep& rep, std::size_t stage, const Rational& iota,
                               const std::vector<Rational>& pins, const MassShave& shave) {
  PairList s = sorted_pairs(tau);
  MassPlan plan;
  plan.iota = iota;
  plan.pins = pins;
  for (const auto& p : s) plan.nodes.push_back(p.first);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    Estimate inc = rep.increment(s[i].first, s[i + 1].first, stage);
    Rational m = (s[i + 1].second - s[i].second) - from_double(inc.value);
    if (shave) m -= shave(m, s[i + 1].first - s[i].first);
    m.canonicalize();
    plan.masses.push_back(m);
  }
  return build_bump(plan);
}

}  // namespace edif
