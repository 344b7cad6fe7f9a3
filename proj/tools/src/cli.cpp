#include "edif/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "edif/average_property.hpp"
#include "edif/d_check.hpp"
#include "edif/error.hpp"
#include "edif/flat_coding.hpp"
#include "edif/forcing.hpp"
#include "edif/serialize.hpp"
#include "edif/slope_gap.hpp"

namespace edif::cli {

namespace {

struct Common {
  bool emit_json{false};
  std::uint64_t seed{7};
  std::string config;
};

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput:
    case ErrorKind::PreconditionViolated:
    case ErrorKind::NoAdmissiblePoint:
    case ErrorKind::HeightConflict:
    case ErrorKind::DivisionByZero:
    case ErrorKind::ScheduleViolation:
    case ErrorKind::DegenerateInterval:
    case ErrorKind::InsufficientDepth:
    case ErrorKind::EqualWithinDepth:
    case ErrorKind::NotInTree:
    case ErrorKind::NegativeAmplitude:
      return kInputError;
    case ErrorKind::Indeterminate:
      return kIndeterminate;
    default:
      return kViolation;
  }
}

std::vector<std::uint64_t> parse_u64_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoull(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "not a natural number: '" + tok + "'");
    }
  }
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& s) {
  std::vector<Rational> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_rational(tok));
  return out;
}

BlockSchedule schedule_from(const std::string& gamma) {
  if (gamma.empty()) return BlockSchedule::minimal();
  return BlockSchedule(parse_u64_list(gamma));
}

void print(std::ostream& out, const Json& j, bool emit_json, const std::string& text) {
  if (emit_json) out << j.dump() << "\n";
  else out << text;
}

// ------------------------------------------------------------------ ap-check

struct ApArgs {
  std::vector<std::string> kernels;
  double C{4.0};
  std::size_t pairs{100000};
  double lo_exp{-6.0}, hi_exp{6.0};
};

int cmd_ap_check(const ApArgs& a, const Common& c, std::ostream& out) {
  if (a.kernels.empty()) throw Error(ErrorKind::InvalidInput, "at least one --kernel c,r,a is required");
  if (!(a.C > 0)) throw Error(ErrorKind::InvalidInput, "--C must be positive");
  KernelSum ks;
  std::vector<double> centers;
  for (const auto& k : a.kernels) {
    auto v = parse_rational_list(k);
    if (v.size() != 3) throw Error(ErrorKind::InvalidInput, "--kernel takes c,r,a");
    ks.emplace_back(v[0], v[1], v[2]);
    centers.push_back(to_double(v[2]));
  }
  RealFunction psi = make_function(ks);
  PairSampler sampler(c.seed, a.pairs, a.lo_exp, a.hi_exp, centers);
  APReport r = check_ap(psi, a.C, sampler.pairs());
  Json j = Json::parse(r.to_json());
  j["seed"] = c.seed;
  j["C"] = a.C;
  std::ostringstream t;
  t << "ap-check seed=" << c.seed << " pairs=" << r.checked << " worst_ratio=" << r.worst_ratio
    << " worst_raw=" << r.worst_raw << " violations=" << r.violations.size() << "\n";
  print(out, j, c.emit_json, t.str());
  return r.ok() ? kPass : kViolation;
}

// ---------------------------------------------------------------------- code

struct CodeArgs {
  std::uint64_t i{1};
  std::string prefix;
  std::string x;
  std::vector<std::string> ys;
  std::size_t depth{256};
  std::string gamma;
};

DigitWord digits_of(const std::string& s) {
  DigitWord w;
  for (char ch : s) {
    if (ch != '0' && ch != '2') throw Error(ErrorKind::InvalidInput, "prefix digits must be 0 or 2");
    w.push_back(static_cast<Digit>(ch - '0'));
  }
  return w;
}

std::string word_str(const DigitWord& w) {
  std::string s;
  for (Digit d : w) s.push_back(static_cast<char>('0' + d));
  return s;
}

int cmd_code(const CodeArgs& a, const Common& c, std::ostream& out) {
  BlockSchedule sched = schedule_from(a.gamma);
  if (!a.ys.empty()) {
    std::vector<TernaryPoint> ys;
    for (const auto& y : a.ys) ys.push_back(TernaryPoint::parse(y));
    DecodeResult d = decode(ys, sched, a.depth);
    bool ok = true;
    Json j;
    j["seed"] = c.seed;
    j["x"] = d.x.str();
    j["prefixes"] = Json::array();
    for (std::size_t i = 0; i < ys.size(); ++i) {
      TernaryPoint z = encode(i, d.shifts[i], d.x, sched, a.depth);
      bool same = std::equal(z.digits().begin(), z.digits().end(), ys[i].digits().begin());
      ok = ok && same;
      j["prefixes"].push_back({{"i", i}, {"s", word_str(d.shifts[i].symbols)}, {"round_trip", same}});
    }
    j["ok"] = ok;
    std::ostringstream t;
    t << "decode seed=" << c.seed << " depth=" << a.depth << " x=" << d.x.str() << " round_trip=" << (ok ? "ok" : "FAIL")
      << "\n";
    print(out, j, c.emit_json, t.str());
    return ok ? kPass : kViolation;
  }
  if (a.x.empty()) throw Error(ErrorKind::InvalidInput, "give --x to encode or --y (repeatable) to decode");
  TernaryPoint x = TernaryPoint::parse(a.x);
  TernaryPoint z = encode(a.i, CodePrefix{digits_of(a.prefix)}, x, sched, a.depth);
  Json j{{"seed", c.seed}, {"i", a.i}, {"s", a.prefix}, {"z", z.str()}};
  print(out, j, c.emit_json, z.str() + "\n");
  return kPass;
}

// ----------------------------------------------------------------- flat-cert

struct FlatArgs {
  std::uint64_t i{1};
  std::string prefix;
  std::size_t q{1}, kmax{6}, depth{256}, pairs{1000};
  std::string gamma;
};

int cmd_flat_cert(const FlatArgs& a, const Common& c, std::ostream& out) {
  BlockSchedule sched = schedule_from(a.gamma);
  std::mt19937_64 rng(c.seed);
  FlatnessReport r = flatness_certificate(a.i, CodePrefix{digits_of(a.prefix)}, a.q, a.kmax, sched, a.depth, a.pairs, rng);
  Json j = Json::parse(r.to_json());
  j["seed"] = c.seed;
  std::ostringstream t;
  t << "flat-cert seed=" << c.seed << " i=" << a.i << " q=" << a.q << " k0=" << r.k0
    << " violations=" << r.total_violations() << "\n";
  for (const auto& row : r.rows)
    t << "  k=" << row.k << " exponent=" << row.exponent.get_str() << " pairs=" << row.pairs << "\n";
  print(out, j, c.emit_json, t.str());
  return r.total_violations() == 0 ? kPass : kViolation;
}

// ------------------------------------------------------------------ slopegap

struct SlopeArgs {
  long ratio{10};
  std::size_t depth{3};
  std::string schedule{"geometric"};
};

int cmd_slopegap(const SlopeArgs& a, const Common& c, std::ostream& out) {
  if (a.schedule != "geometric" && a.schedule != "accelerating")
    throw Error(ErrorKind::InvalidInput, "--schedule must be geometric or accelerating");
  BoxSchedule sched = a.schedule == "accelerating" ? BoxSchedule::accelerating(a.ratio, a.depth + 2)
                                                   : BoxSchedule::geometric(a.ratio, a.depth + 2);
  BoxTree tree = build_pair(sched, a.depth);
  auto pts = corner_points(tree);
  std::size_t checked = 0, violations = 0;
  for (std::size_t u = 0; u < pts.size(); ++u)
    for (std::size_t v = u + 1; v < pts.size(); ++v) {
      if (pts[u].x == pts[v].x || pts[u].y == pts[v].y) continue;
      try {
        Classification cl = classify_pair(tree, pts[u], pts[v]);
        ++checked;
        if (!cl.within_bound) ++violations;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SameLeaf) throw;
      }
    }
  Json j{{"seed", c.seed}, {"ratio", a.ratio}, {"depth", a.depth}, {"pairs", checked}, {"violations", violations}};
  j["bounds"] = Json::array();
  std::ostringstream t;
  t << "slopegap seed=" << c.seed << " pairs=" << checked << " violations=" << violations << "\n";
  for (std::size_t n = 0; n < a.depth; ++n) {
    SlopeBounds b = slope_bounds(sched, n);
    j["bounds"].push_back({{"n", n}, {"small_max", format_rational(b.small_max)}, {"large_min", format_rational(b.large_min)}});
    t << "  n=" << n << " small_max=" << format_rational(b.small_max) << " large_min=" << format_rational(b.large_min)
      << "\n";
  }
  print(out, j, c.emit_json, t.str());
  return violations == 0 ? kPass : kViolation;
}

// --------------------------------------------------------------------- forge

struct ForgeArgs {
  std::string dpool, epool, targets{"none"}, out_path, samples;
  std::size_t rounds{0};
  std::string grid_lo{"-2"}, grid_hi{"2"};
  std::size_t grid_n{201};
};

GridPool default_dpool() { return GridPool(Rational(-4), Rational(4), -16, 0, 2, 61); }

std::vector<Rational> sample_grid(const ForgeArgs& a) {
  Rational lo = parse_rational(a.grid_lo), hi = parse_rational(a.grid_hi);
  if (a.grid_n < 2 || !(lo < hi)) throw Error(ErrorKind::InvalidInput, "sample grid needs n >= 2 and lo < hi");
  std::vector<Rational> xs;
  for (std::size_t k = 0; k < a.grid_n; ++k) {
    Rational x = lo + (hi - lo) * Rational(static_cast<long>(k), static_cast<long>(a.grid_n - 1));
    x.canonicalize();
    xs.push_back(x);
  }
  return xs;
}

int cmd_forge(const ForgeArgs& a, const Common& c, std::ostream& out) {
  std::unique_ptr<PointPool> dpool;
  if (!a.dpool.empty()) dpool = pool_from_json(read_json_file(a.dpool));
  else dpool = std::make_unique<GridPool>(default_dpool());
  std::unique_ptr<PointPool> epool;
  if (!a.epool.empty()) epool = pool_from_json(read_json_file(a.epool));
  std::vector<LabeledPoint> targets;
  if (a.targets != "none") targets = targets_from_json(read_json_file(a.targets));
  auto xs = sample_grid(a);

  ConstructionOptions co;
  co.seed = c.seed;
  ConstructionResult r = run_construction(*dpool, epool.get(), targets, a.rounds, co);
  Json cj = condition_to_json(r.condition);
  if (!a.out_path.empty()) {
    std::ofstream f(a.out_path);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + a.out_path);
    f << cj.dump(2) << "\n";
  }
  if (!a.samples.empty()) {
    std::ofstream f(a.samples);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + a.samples);
    write_samples_csv(f, r.condition.rep, xs, c.seed);
  }
  Json j{{"seed", c.seed},
         {"N", r.condition.N()},
         {"sigma_size", r.condition.sigma.size()},
         {"targets_used", r.targets_used},
         {"rep_hash", rep_hash(r.condition.rep)}};
  if (a.out_path.empty()) j["condition"] = cj;
  std::ostringstream t;
  t << "forge seed=" << c.seed << " N=" << r.condition.N() << " |sigma|=" << r.condition.sigma.size()
    << " rep_hash=" << rep_hash(r.condition.rep) << "\n";
  if (a.out_path.empty() && !c.emit_json) t << cj.dump(2) << "\n";
  print(out, j, c.emit_json, t.str());
  return kPass;
}

// ------------------------------------------------------------------ validate

struct ValidateArgs {
  std::string cond, dpool, epool;
  std::size_t ap_pairs{1500};
};

int cmd_validate(const ValidateArgs& a, const Common& c, std::ostream& out) {
  Condition cond = condition_from_json(read_json_file(a.cond));
  std::unique_ptr<PointPool> dpool, epool;
  if (!a.dpool.empty()) dpool = pool_from_json(read_json_file(a.dpool));
  if (!a.epool.empty()) epool = pool_from_json(read_json_file(a.epool));
  ValidateOptions vo;
  vo.dpool = dpool.get();
  vo.epool = epool.get();
  vo.ap_pairs = a.ap_pairs;
  vo.seed = c.seed;
  ClauseReport r = validate(cond, vo);
  Json j = Json::parse(r.to_json());
  j["seed"] = c.seed;
  j["N"] = cond.N();
  std::ostringstream t;
  t << "validate seed=" << c.seed << " N=" << cond.N() << "\n";
  for (const auto& cl : r.clauses)
    t << "  " << cl.clause << " " << to_string(cl.status) << (cl.detail.empty() ? "" : " (" + cl.detail + ")") << "\n";
  print(out, j, c.emit_json, t.str());
  if (r.ok()) return kPass;
  return r.indeterminate() ? kIndeterminate : kViolation;
}

// -------------------------------------------------------------------- dcheck

struct DArgs {
  std::string cond;
  std::string x{"0"};
  double eps{0x1p-10}, C{4.0}, tol{0x1p-7};
  std::size_t samples{256};
  int jmin{4}, jmax{20};
};

int cmd_dcheck(const DArgs& a, const Common& c, std::ostream& out) {
  Condition cond = a.cond.empty() ? Condition::trivial() : condition_from_json(read_json_file(a.cond));
  Rational x = parse_rational(a.x);
  if (a.jmin > a.jmax) throw Error(ErrorKind::InvalidInput, "--jmin must not exceed --jmax");
  std::vector<double> hs;
  for (int j = a.jmin; j <= a.jmax; ++j) hs.push_back(std::ldexp(1.0, -j));
  DerivativeReport dr = derivative_check(cond.rep, x, hs);
  DCheckReport avr = finite_stage_D_check(cond.rep, x, a.eps, a.C, a.samples, c.seed);
  bool ok = dr.pass(a.tol) && avr.ok();
  Json j{{"seed", c.seed}, {"ok", ok}};
  j["quotients"] = Json::parse(dr.to_json());
  j["averages"] = Json::parse(avr.to_json());
  std::ostringstream t;
  t << "dcheck seed=" << c.seed << " x=" << format_rational(x) << " g=" << dr.g_x << " final_gap=" << dr.final_gap()
    << " monotone=" << dr.monotone << " corridor=" << (avr.ok() ? "ok" : "FAIL") << "\n";
  print(out, j, c.emit_json, t.str());
  return ok ? kPass : kViolation;
}

// Appends "--key value" for JSON config entries the command line lacks.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") path = args[i + 1];
  if (path.empty()) return args;
  Json cfg = read_json_file(path);
  if (!cfg.is_object()) throw Error(ErrorKind::InvalidInput, "config must be a JSON object");
  std::vector<std::string> out = args;
  for (const auto& [key, val] : cfg.items()) {
    std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    auto push = [&](const Json& v) {
      out.push_back(flag);
      out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    };
    if (val.is_boolean()) {
      if (val.get<bool>()) out.push_back(flag);
    } else if (val.is_array()) {
      for (const auto& v : val) push(v);
    } else {
      push(val);
    }
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and certified checks for everywhere-differentiable constructions", "edif"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--emit-json", common.emit_json, "Machine-readable report on stdout");
    sub->add_option("--seed", common.seed, "Seed recorded in every output");
    sub->add_option("--config", common.config, "JSON file of option defaults; flags win");
  };

  ApArgs ap;
  auto* s_ap = app.add_subcommand("ap-check", "Falsify the C-average property of a kernel sum");
  s_ap->add_option("--kernel", ap.kernels, "c,r,a for c(1+r|x-a|)^(-1/2); repeatable")->required();
  s_ap->add_option("--C", ap.C, "Average-property constant");
  s_ap->add_option("--pairs", ap.pairs, "Number of sampled intervals");
  s_ap->add_option("--lo-exp", ap.lo_exp, "log10 of the smallest sampled magnitude");
  s_ap->add_option("--hi-exp", ap.hi_exp, "log10 of the largest sampled magnitude");
  add_common(s_ap);

  CodeArgs code;
  auto* s_code = app.add_subcommand("code", "Encode f_i^s(x) or decode targets into (x, s_i)");
  s_code->add_option("--i", code.i, "Map index");
  s_code->add_option("--prefix", code.prefix, "Prefix s over {0,2}");
  s_code->add_option("--x", code.x, "Ternary word to encode, e.g. 2.0202");
  s_code->add_option("--y", code.ys, "Target word to decode; repeatable");
  s_code->add_option("--depth", code.depth, "Digits to produce");
  s_code->add_option("--gamma", code.gamma, "Block schedule, comma separated");
  add_common(s_code);

  FlatArgs flat;
  auto* s_flat = app.add_subcommand("flat-cert", "Digit-space flatness certificate for f_i^s");
  s_flat->add_option("--i", flat.i, "Map index");
  s_flat->add_option("--prefix", flat.prefix, "Prefix s over {0,2}");
  s_flat->add_option("--q", flat.q, "Hoelder order");
  s_flat->add_option("--kmax", flat.kmax, "Levels to tabulate");
  s_flat->add_option("--depth", flat.depth, "Digits per sampled point");
  s_flat->add_option("--pairs", flat.pairs, "Sampled pairs");
  s_flat->add_option("--gamma", flat.gamma, "Block schedule, comma separated");
  add_common(s_flat);

  SlopeArgs slope;
  auto* s_slope = app.add_subcommand("slopegap", "Exhaustive slope dichotomy on box corners");
  s_slope->add_option("--ratio", slope.ratio, "Schedule ratio R");
  s_slope->add_option("--depth", slope.depth, "Tree depth");
  s_slope->add_option("--schedule", slope.schedule, "geometric or accelerating");
  add_common(s_slope);

  ForgeArgs forge;
  auto* s_forge = app.add_subcommand("forge", "Run the construction and emit the final condition");
  s_forge->add_option("--D", forge.dpool, "Domain pool JSON (default: grid 2^-16 on [-4,4])");
  s_forge->add_option("--E", forge.epool, "Range pool JSON");
  s_forge->add_option("--targets", forge.targets, "Targets JSON, or 'none'");
  s_forge->add_option("--rounds", forge.rounds, "Number of advances");
  s_forge->add_option("--out", forge.out_path, "Condition JSON output");
  s_forge->add_option("--samples", forge.samples, "CSV samples x,g,f,errBound");
  s_forge->add_option("--grid-lo", forge.grid_lo, "Sample grid start");
  s_forge->add_option("--grid-hi", forge.grid_hi, "Sample grid end");
  s_forge->add_option("--grid-n", forge.grid_n, "Sample grid size");
  add_common(s_forge);

  ValidateArgs val;
  auto* s_val = app.add_subcommand("validate", "Check every clause of a condition");
  s_val->add_option("--cond", val.cond, "Condition JSON")->required();
  s_val->add_option("--D", val.dpool, "Domain pool JSON");
  s_val->add_option("--E", val.epool, "Range pool JSON");
  s_val->add_option("--ap-pairs", val.ap_pairs, "Intervals per kernel layer for the average check");
  add_common(s_val);

  DArgs dc;
  auto* s_dc = app.add_subcommand("dcheck", "Difference quotients and average corridor at a point");
  s_dc->add_option("--cond", dc.cond, "Condition JSON (default: the trivial condition)");
  s_dc->add_option("--x", dc.x, "Point, exact rational");
  s_dc->add_option("--eps", dc.eps, "Corridor epsilon");
  s_dc->add_option("--C", dc.C, "Average-property constant");
  s_dc->add_option("--tol", dc.tol, "Required final quotient gap");
  s_dc->add_option("--samples", dc.samples, "Sampled h values");
  s_dc->add_option("--jmin", dc.jmin, "Largest h is 2^-jmin");
  s_dc->add_option("--jmax", dc.jmax, "Smallest h is 2^-jmax");
  add_common(s_dc);

  try {
    std::vector<std::string> args = merge_config(raw_args);
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "edif: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "edif: " << e.what() << "\n";
    return exit_for(e.kind());
  }

  try {
    if (*s_ap) return cmd_ap_check(ap, common, out);
    if (*s_code) return cmd_code(code, common, out);
    if (*s_flat) return cmd_flat_cert(flat, common, out);
    if (*s_slope) return cmd_slopegap(slope, common, out);
    if (*s_forge) return cmd_forge(forge, common, out);
    if (*s_val) return cmd_validate(val, common, out);
    if (*s_dc) return cmd_dcheck(dc, common, out);
  } catch (const Error& e) {
    err << "edif: " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    err << "edif: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace edif::cli
