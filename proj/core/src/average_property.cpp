#include "edif/average_property.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "edif/error.hpp"
#include "edif/quadrature.hpp"

namespace edif {

namespace {

// Portable uniform in [0, 1): the standard distributions are not specified
// bit-for-bit across library implementations.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void record(APReport& rep, const RealFunction& psi, double C, double a, double b) {
  double fa = psi(a), fb = psi(b);
  if (fa < 0 || fb < 0 || std::isnan(fa) || std::isnan(fb))
    throw Error(ErrorKind::NegativeValueDetected,
                psi.name + " is negative at " + std::to_string(fa < 0 ? a : b));
  Average av = average(psi, a, b);
  double m = std::min(fa, fb);
  ++rep.checked;
  double raw = m > 0 ? av.value / m : (av.value > 0 ? INFINITY : 1.0);
  double ratio = raw / C;
  if (ratio > rep.worst_ratio) {
    rep.worst_ratio = ratio;
    rep.worst_raw = raw;
    rep.worst_a = a;
    rep.worst_b = b;
  }
  if (av.value - av.error > C * m * (1.0 + 1e-12)) rep.violations.push_back({a, b, av.value, C * m});
}

}  // namespace

RealFunction make_function(const KernelSum& s, std::string name) {
  RealFunction f;
  f.value = [s](double x) { return eval(s, x); };
  f.integral = [s](double lo, double hi) { return integral(s, lo, hi); };
  f.name = std::move(name);
  for (const auto& k : s) f.kinks.push_back(k.ad());
  return f;
}

RealFunction constant_function(double c) {
  RealFunction f;
  f.value = [c](double) { return c; };
  f.integral = [c](double lo, double hi) { return c * (hi - lo); };
  f.name = "constant";
  return f;
}

Average average(const RealFunction& psi, double a, double b) {
  if (a == b) throw Error(ErrorKind::DegenerateInterval, "average over a zero-length interval");
  if (psi.integral) {
    double v = psi.integral(a, b) / (b - a);
    return {v, 1e-14 * std::fabs(v) + 1e-300, true};
  }
  double scale = std::max(std::fabs(psi(a)), std::fabs(psi(b))) + 1e-300;
  QuadResult q = adaptive_simpson(psi.value, a, b, 1e-13 * scale * std::fabs(b - a), psi.kinks);
  return {q.value / (b - a), q.error / std::fabs(b - a), false};
}

std::string APReport::to_json() const {
  nlohmann::json j;
  j["checked"] = checked;
  j["worst_ratio"] = worst_ratio;
  j["worst_raw"] = worst_raw;
  j["worst_pair"] = {worst_a, worst_b};
  j["violations"] = nlohmann::json::array();
  for (const auto& v : violations)
    j["violations"].push_back({{"a", v.a}, {"b", v.b}, {"average", v.average}, {"bound", v.bound}});
  j["ok"] = ok();
  return j.dump();
}

PairSampler::PairSampler(std::uint64_t seed, std::size_t count, double lo_exp, double hi_exp,
                         std::vector<double> centers)
    : seed_(seed), count_(count), lo_exp_(lo_exp), hi_exp_(hi_exp), centers_(std::move(centers)) {}

std::vector<std::pair<double, double>> PairSampler::pairs() const {
  std::mt19937_64 rng(seed_);
  auto mag = [&] { return std::pow(10.0, lo_exp_ + (hi_exp_ - lo_exp_) * unit(rng)); };
  auto sgn = [&] { return (rng() & 1) ? 1.0 : -1.0; };
  std::vector<std::pair<double, double>> out;
  out.reserve(count_);
  // One pair in eight straddles a center, the adversarial configuration.
  for (std::size_t n = 0; n < count_; ++n) {
    double a, b;
    if (n % 8 == 7 && !centers_.empty()) {
      double c = centers_[rng() % centers_.size()];
      a = c - mag();
      b = c + mag();
    } else {
      a = sgn() * mag();
      b = sgn() * mag();
    }
    if (a == b) b = a + 1.0;
    out.emplace_back(a, b);
  }
  return out;
}

std::vector<double> PairSampler::magnitudes() const {
  std::mt19937_64 rng(seed_ ^ 0x9e3779b97f4a7c15ULL);
  std::vector<double> out(count_);
  for (auto& m : out) m = std::pow(10.0, lo_exp_ + (hi_exp_ - lo_exp_) * unit(rng));
  return out;
}

APReport check_ap(const RealFunction& psi, double C, const std::vector<std::pair<double, double>>& pairs) {
  if (!(C > 0)) throw Error(ErrorKind::InvalidInput, "C must be positive");
  APReport rep;
  for (const auto& [a, b] : pairs) record(rep, psi, C, a, b);
  return rep;
}

SymmetricReport check_symmetric_sufficient(const RealFunction& psi, double C, double center,
                                           const std::vector<double>& magnitudes) {
  SymmetricReport rep;
  for (double m : magnitudes) {
    double b = center + m;
    double fb = psi(b);
    if (fb < 0) throw Error(ErrorKind::NegativeValueDetected, psi.name + " is negative");
    Average av = average(psi, center, b);
    ++rep.one_sided.checked;
    double raw = av.value / fb;
    if (raw / C > rep.one_sided.worst_ratio) {
      rep.one_sided.worst_ratio = raw / C;
      rep.one_sided.worst_raw = raw;
      rep.one_sided.worst_a = center;
      rep.one_sided.worst_b = b;
    }
    if (av.value - av.error > C * fb * (1.0 + 1e-12)) rep.one_sided.violations.push_back({center, b, av.value, C * fb});

    double fm = psi(center - m);
    if (std::fabs(fm - fb) > 1e-12 * std::max(fm, fb)) rep.symmetry_ok = false;
    if (psi(center + 0.5 * m) < fb * (1.0 - 1e-12)) rep.monotone_ok = false;
  }
  // Spot checks of the two reductions against 2C.
  for (std::size_t n = 0; n + 1 < magnitudes.size(); n += 2) {
    double m0 = magnitudes[n], m1 = magnitudes[n + 1];
    record(rep.case_straddle, psi, 2 * C, center - m0, center + m1);
    double lo = std::min(m0, m1), hi = std::max(m0, m1);
    if (lo != hi) record(rep.case_same_side, psi, 2 * C, center + lo, center + hi);
  }
  return rep;
}

}  // namespace edif
