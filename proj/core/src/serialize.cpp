#include "edif/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "edif/error.hpp"

namespace edif {

namespace {

std::string q(const Rational& x) { return format_rational(x); }

Rational rat(const Json& j, const char* what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) throw Error(ErrorKind::InvalidInput, std::string(what) + ": give rationals as strings");
  throw Error(ErrorKind::InvalidInput, std::string(what) + ": expected a rational");
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::InvalidInput, std::string("missing field '") + key + "'");
  return j.at(key);
}

Json bump_to_json(const PiecewiseBump& b) {
  Json j;
  j["height"] = q(b.height());
  j["pins"] = Json::array();
  for (const auto& p : b.pins()) j["pins"].push_back(q(p));
  j["pieces"] = Json::array();
  for (const auto& p : b.pieces()) {
    Json c = Json::array();
    for (const auto& x : p.coeffs) c.push_back(q(x));
    j["pieces"].push_back({{"x0", q(p.x0)}, {"x1", q(p.x1)}, {"coeffs", c}});
  }
  return j;
}

PiecewiseBump bump_from_json(const Json& j) {
  if (j.is_null()) return {};
  std::vector<BumpPiece> pieces;
  for (const auto& p : field(j, "pieces")) {
    BumpPiece bp{rat(field(p, "x0"), "x0"), rat(field(p, "x1"), "x1"), {}};
    for (const auto& c : field(p, "coeffs")) bp.coeffs.push_back(rat(c, "coeff"));
    pieces.push_back(std::move(bp));
  }
  std::vector<Rational> pins;
  for (const auto& p : field(j, "pins")) pins.push_back(rat(p, "pin"));
  return PiecewiseBump(std::move(pieces), std::move(pins), rat(field(j, "height"), "height"));
}

Json layers_json(const FuncRep& rep) {
  Json layers;
  layers["base"] = {{"kappa", q(rep.kappa())}, {"constant", q(rep.constant())}};
  layers["psi"] = Json::array();
  layers["theta"] = Json::array();
  for (std::size_t n = 0; n < rep.stages(); ++n) {
    const Layer& L = rep.layers()[n];
    Json ks = Json::array();
    for (const auto& k : L.psi) ks.push_back({{"c", q(k.c())}, {"r", q(k.r())}, {"a", q(k.a())}});
    layers["psi"].push_back(ks);
    layers["theta"].push_back({{"stage", n},
                               {"type", L.clipped ? "clipped" : "plain"},
                               {"eps", q(L.eps)},
                               {"bump", L.bump.empty() ? Json() : bump_to_json(L.bump)}});
  }
  return layers;
}

}  // namespace

Json point_to_json(const LabeledPoint& p) { return {{"v", q(p.v)}, {"h", {p.h.limit, p.h.offset}}}; }

LabeledPoint point_from_json(const Json& j) {
  LabeledPoint p{rat(field(j, "v"), "v"), {}};
  const Json& h = field(j, "h");
  if (!h.is_array() || h.size() != 2 || !h[0].is_number_unsigned() || !h[1].is_number_unsigned())
    throw Error(ErrorKind::InvalidInput, "height must be [limit, offset] with naturals");
  p.h = {h[0].get<std::uint64_t>(), h[1].get<std::uint64_t>()};
  return p;
}

Json condition_to_json(const Condition& c) {
  Json j;
  j["sigma"] = Json::array();
  for (const auto& s : c.sigma) j["sigma"].push_back({{"d", point_to_json(s.d)}, {"e", point_to_json(s.e)}});
  j["N"] = c.N();
  j["layers"] = layers_json(c.rep);
  j["meta"] = {{"zeta", q(c.meta.zeta)}, {"eps", q(c.meta.eps)}, {"seed", c.meta.seed}, {"rep_hash", rep_hash(c.rep)}};
  return j;
}

Condition condition_from_json(const Json& j) {
  try {
    Condition c;
    for (const auto& s : field(j, "sigma")) c.sigma.push_back({point_from_json(field(s, "d")), point_from_json(field(s, "e"))});
    c.sort_sigma();
    const Json& L = field(j, "layers");
    const Json& base = field(L, "base");
    FuncRep rep(rat(field(base, "kappa"), "kappa"), rat(field(base, "constant"), "constant"));
    const Json& psi = field(L, "psi");
    const Json& theta = field(L, "theta");
    if (!psi.is_array() || !theta.is_array() || psi.size() != theta.size())
      throw Error(ErrorKind::InvalidInput, "psi and theta must be arrays of equal length");
    for (std::size_t n = 0; n < psi.size(); ++n) {
      Layer layer;
      for (const auto& k : psi[n]) layer.psi.emplace_back(rat(field(k, "c"), "c"), rat(field(k, "r"), "r"), rat(field(k, "a"), "a"));
      const Json& t = theta[n];
      std::string type = field(t, "type").get<std::string>();
      if (type != "clipped" && type != "plain") throw Error(ErrorKind::InvalidInput, "theta type must be clipped or plain");
      layer.clipped = type == "clipped";
      layer.eps = rat(field(t, "eps"), "eps");
      layer.bump = bump_from_json(t.contains("bump") ? t.at("bump") : Json());
      rep = rep.with_layer(std::move(layer));
    }
    if (j.contains("N") && field(j, "N").get<std::size_t>() != rep.stages())
      throw Error(ErrorKind::InvalidInput, "N does not match the number of layers");
    c.rep = std::move(rep);
    if (j.contains("meta")) {
      const Json& m = j.at("meta");
      if (m.contains("zeta")) c.meta.zeta = rat(m.at("zeta"), "zeta");
      if (m.contains("eps")) c.meta.eps = rat(m.at("eps"), "eps");
      if (m.contains("seed")) c.meta.seed = m.at("seed").get<std::uint64_t>();
    }
    return c;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("condition JSON: ") + e.what());
  }
}

std::unique_ptr<PointPool> pool_from_json(const Json& j) {
  try {
    std::string type = field(j, "type").get<std::string>();
    if (type == "grid") {
      return std::make_unique<GridPool>(rat(field(j, "lo"), "lo"), rat(field(j, "hi"), "hi"),
                                        field(j, "step_log2").get<long>(), field(j, "limit").get<std::uint64_t>(),
                                        field(j, "base").get<std::uint64_t>(), field(j, "modulus").get<std::uint64_t>());
    }
    if (type == "list") {
      std::vector<LabeledPoint> pts;
      for (const auto& p : field(j, "points")) pts.push_back(point_from_json(p));
      return std::make_unique<ListPool>(std::move(pts));
    }
    throw Error(ErrorKind::InvalidInput, "pool type must be grid or list");
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("pool JSON: ") + e.what());
  }
}

Json pool_to_json(const GridPool& g) {
  return {{"type", "grid"},     {"lo", q(g.lo())},       {"hi", q(g.hi())},          {"step_log2", g.step_log2()},
          {"limit", g.limit()}, {"base", g.base()}, {"modulus", g.modulus()}};
}

Json pool_to_json(const ListPool& l) {
  Json pts = Json::array();
  for (const auto& p : l.points()) pts.push_back(point_to_json(p));
  return {{"type", "list"}, {"points", pts}};
}

std::vector<LabeledPoint> targets_from_json(const Json& j) {
  const Json& arr = j.is_object() ? field(j, "targets") : j;
  if (!arr.is_array()) throw Error(ErrorKind::InvalidInput, "targets must be an array");
  std::vector<LabeledPoint> out;
  for (const auto& t : arr) out.push_back(point_from_json(t));
  return out;
}

std::string rep_hash(const FuncRep& rep) {
  std::string s = layers_json(rep).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_samples_csv(std::ostream& os, const FuncRep& rep, const std::vector<Rational>& xs, std::uint64_t seed) {
  os << "# rep_hash=" << rep_hash(rep) << " seed=" << seed << " stages=" << rep.stages() << "\n";
  os << "x,g,f,errBound\n";
  char buf[128];
  for (const auto& x : xs) {
    Frame fr = rep.frame(x);
    Estimate g = rep.g(fr, 0.0, rep.stages());
    Estimate f = rep.f(fr, 0.0, rep.stages());
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.3g\n", to_double(x), g.value, f.value, std::max(g.err, f.err));
    os << buf;
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
  }
}

}  // namespace edif
