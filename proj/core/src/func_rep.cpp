#include "edif/func_rep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "edif/error.hpp"

namespace edif {

namespace {

constexpr double kUlp = 0x1.0p-53;
// Region scan: log-spaced offsets per octave, from 2^kScanMinLog2 outward.
constexpr int kScanPerOctave = 24;
constexpr int kScanMinLog2 = -160;
constexpr double kOuterReach = 0x1.0p20;

int sign_of(double v) { return (v > 0) - (v < 0); }

}  // namespace

double base_shape(double x) {
  double x2 = x * x;
  return x2 / (x2 + 1.0);
}

double base_primitive(double x) {
  double ax = std::fabs(x);
  if (ax < 0.125) {
    // x^3/3 - x^5/5 + x^7/7 - ...
    double x2 = x * x, term = x * x2, sum = 0.0;
    for (int k = 3; k < 60; k += 2) {
      double t = term / k;
      sum += ((k / 2) % 2 == 1) ? t : -t;
      term *= x2;
      if (std::fabs(t) < 1e-18 * std::fabs(sum)) break;
    }
    return sum;
  }
  return x - std::atan(x);
}

// ---------------------------------------------------------------- bumps

PiecewiseBump::PiecewiseBump(std::vector<BumpPiece> pieces, std::vector<Rational> pins, Rational height)
    : pieces_(std::move(pieces)), pins_(std::move(pins)), height_(std::move(height)) {
  std::sort(pieces_.begin(), pieces_.end(), [](const BumpPiece& a, const BumpPiece& b) { return a.x0 < b.x0; });
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (!(p.x0 < p.x1)) throw Error(ErrorKind::InvalidInput, "bump piece with empty support");
    if (i > 0 && pieces_[i - 1].x1 > p.x0) throw Error(ErrorKind::InvalidInput, "overlapping bump pieces");
    Cache c{to_double(p.x0), to_double(p.x1), {}, {0.0}};
    for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
      c.c.push_back(to_double(p.coeffs[k]));
      Rational ik = p.coeffs[k] / Rational(static_cast<long>(k + 1));
      c.ic.push_back(to_double(ik));
    }
    cache_.push_back(std::move(c));
  }
}

double PiecewiseBump::operator()(double x) const {
  auto it = std::upper_bound(cache_.begin(), cache_.end(), x, [](double v, const Cache& c) { return v < c.x0; });
  if (it == cache_.begin()) return 0.0;
  --it;
  if (x > it->x1) return 0.0;
  double t = x - it->x0, v = 0.0;
  for (std::size_t k = it->c.size(); k-- > 0;) v = v * t + it->c[k];
  return v;
}

double PiecewiseBump::primitive_to(std::size_t i, double x) const {
  const Cache& c = cache_[i];
  double t = std::clamp(x, c.x0, c.x1) - c.x0, v = 0.0;
  for (std::size_t k = c.ic.size(); k-- > 0;) v = v * t + c.ic[k];
  return v;
}

double PiecewiseBump::integral(double lo, double hi) const {
  double sgn = 1.0;
  if (lo > hi) {
    std::swap(lo, hi);
    sgn = -1.0;
  }
  double v = 0.0;
  for (std::size_t i = 0; i < cache_.size(); ++i) {
    if (cache_[i].x1 <= lo || cache_[i].x0 >= hi) continue;
    v += primitive_to(i, hi) - primitive_to(i, lo);
  }
  return sgn * v;
}

Rational PiecewiseBump::piece_integral(const BumpPiece& p) {
  Rational w = p.x1 - p.x0, wk = w, total = 0;
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
    total += p.coeffs[k] * wk / Rational(static_cast<long>(k + 1));
    wk *= w;
  }
  total.canonicalize();
  return total;
}

Rational PiecewiseBump::exact_integral(const Rational& lo, const Rational& hi) const {
  Rational total = 0;
  for (const auto& p : pieces_)
    if (p.x0 >= lo && p.x1 <= hi) total += piece_integral(p);
  return total;
}

// ---------------------------------------------------------------- FuncRep

FuncRep::FuncRep(Rational kappa, Rational constant)
    : kappa_(std::move(kappa)), constant_(std::move(constant)) {
  if (sgn(kappa_) < 0) throw Error(ErrorKind::InvalidInput, "base scale must be >= 0");
  kappa_d_ = to_double(kappa_);
  constant_d_ = to_double(constant_);
  add_anchor(Rational(0));
}

std::size_t FuncRep::anchor_index(const Rational& a) const {
  for (std::size_t j = 0; j < anchors_.size(); ++j)
    if (anchors_[j] == a) return j;
  return anchors_.size();
}

void FuncRep::add_anchor(const Rational& a) {
  if (anchor_index(a) < anchors_.size()) return;
  anchors_.push_back(a);
  for (auto& fr : anchor_frames_) fr.dist.push_back(to_double(fr.origin - a));
  anchor_frames_.push_back(frame(a));
}

Frame FuncRep::frame(const Rational& x) const {
  Frame fr{x, to_double(x), {}};
  fr.dist.reserve(anchors_.size());
  for (const auto& a : anchors_) fr.dist.push_back(x == a ? 0.0 : to_double(x - a));
  return fr;
}

FuncRep FuncRep::with_layer(Layer layer) const {
  FuncRep out = *this;
  std::vector<std::size_t> idx;
  for (const auto& k : layer.psi) {
    out.add_anchor(k.a());
    idx.push_back(out.anchor_index(k.a()));
  }
  out.kernel_anchor_.push_back(std::move(idx));
  out.eps_d_.push_back(layer.clipped ? to_double(layer.eps) : 0.0);
  out.layers_.push_back(std::move(layer));
  out.regions_.emplace_back();
  if (out.layers_.back().clipped) out.locate_regions(out.layers_.size() - 1);
  return out;
}

FuncRep FuncRep::with_last_bump(PiecewiseBump bump) const {
  if (layers_.empty()) throw Error(ErrorKind::StageNotFound, "no layer to attach a bump to");
  FuncRep out = *this;
  out.layers_.back().bump = std::move(bump);
  return out;
}

FuncRep FuncRep::truncated(std::size_t n) const {
  if (n > stages()) throw Error(ErrorKind::PreconditionViolated, "truncation beyond the stored stages");
  FuncRep out = *this;
  out.layers_.resize(n);
  out.regions_.resize(n);
  out.kernel_anchor_.resize(n);
  out.eps_d_.resize(n);
  return out;
}

double FuncRep::psi_at(std::size_t n, const Frame& fr, double off) const {
  const auto& psi = layers_[n].psi;
  const auto& ka = kernel_anchor_[n];
  double v = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) v += psi[k].at_offset(fr.dist[ka[k]] + off);
  return v;
}

double FuncRep::psi_span(std::size_t n, const Frame& fr, double o0, double o1) const {
  const auto& psi = layers_[n].psi;
  const auto& ka = kernel_anchor_[n];
  double du = o1 - o0, v = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    double base = fr.dist[ka[k]];
    v += psi[k].integral_span(base + o0, base + o1, du);
  }
  return v;
}

double FuncRep::b_span(const Frame& fr, double o0, double o1) const {
  double du = o1 - o0;
  if (std::fabs(du) <= 0x1.0p-6) {
    // Three-point Gauss-Legendre; b is entire near the real axis.
    static const double node = std::sqrt(0.6);
    double mid = fr.origin_d + 0.5 * (o0 + o1), half = 0.5 * du;
    return du * (5.0 * base_shape(mid - node * half) + 8.0 * base_shape(mid) + 5.0 * base_shape(mid + node * half)) /
           18.0;
  }
  return base_primitive(fr.origin_d + o1) - base_primitive(fr.origin_d + o0);
}

double FuncRep::bump_span(const PiecewiseBump& b, const Frame& fr, double o0, double o1) const {
  if (b.empty()) return 0.0;
  double du = o1 - o0;
  if (std::fabs(du) < 1e-9) return du * b(fr.origin_d + 0.5 * (o0 + o1));
  return b.integral(fr.origin_d + o0, fr.origin_d + o1);
}

double FuncRep::region_span(std::size_t n, const Frame& fr, double o0, double o1, double& mag) const {
  double sgn = 1.0;
  if (o0 > o1) {
    std::swap(o0, o1);
    sgn = -1.0;
  }
  double total = 0.0;
  for (const auto& piece : regions_[n]) {
    double shift = fr.dist[piece.anchor];
    double lo = std::max(o0 + shift, piece.lo), hi = std::min(o1 + shift, piece.hi);
    if (!(lo < hi)) continue;
    if (lo == piece.lo && hi == piece.hi) {
      total += piece.mass;
    } else {
      const Frame& af = anchor_frames_[piece.anchor];
      double v = psi_span(n, af, lo, hi) - local(af, lo, hi, n, mag);
      total += std::max(v, 0.0);
    }
  }
  mag += std::fabs(total);
  return sgn * total;
}

double FuncRep::local(const Frame& fr, double o0, double o1, std::size_t stage, double& mag) const {
  // Where a span sits inside one positivity piece of a clipped layer,
  // g_{n+1} = eps b + bump there, so the stages below cancel exactly.
  double lo = std::min(o0, o1), hi = std::max(o0, o1);
  std::size_t start = 0;
  for (std::size_t n = stage; n-- > 0 && start == 0;) {
    if (!layers_[n].clipped) continue;
    // Pieces on either side of an anchor touch there; merge them in this frame.
    std::vector<std::pair<double, double>> iv;
    for (const auto& piece : regions_[n]) {
      double shift = fr.dist[piece.anchor];
      if (piece.hi - shift >= lo && piece.lo - shift <= hi) iv.emplace_back(piece.lo - shift, piece.hi - shift);
    }
    std::sort(iv.begin(), iv.end());
    for (std::size_t i = 0; i < iv.size(); ++i) {
      double a = iv[i].first, b = iv[i].second;
      while (i + 1 < iv.size() && iv[i + 1].first <= b) b = std::max(b, iv[++i].second);
      if (a <= lo && hi <= b) start = n + 1;
    }
  }
  double v;
  if (start > 0) {
    const Layer& L = layers_[start - 1];
    v = eps_d_[start - 1] * b_span(fr, o0, o1) + bump_span(L.bump, fr, o0, o1);
  } else {
    v = kappa_d_ * b_span(fr, o0, o1) + constant_d_ * (o1 - o0);
  }
  mag += std::fabs(v);
  for (std::size_t n = start; n < stage; ++n) {
    const Layer& L = layers_[n];
    double p = psi_span(n, fr, o0, o1);
    v -= p;
    mag += std::fabs(p);
    if (L.clipped) {
      v += region_span(n, fr, o0, o1, mag);
      double e = eps_d_[n] * b_span(fr, o0, o1);
      v += e;
      mag += std::fabs(e);
    }
    double t = bump_span(L.bump, fr, o0, o1);
    v += t;
    mag += std::fabs(t);
  }
  return v;
}

double FuncRep::global_f(const Frame& fr, double off, std::size_t stage, double& mag, Telescoped* parts) const {
  double x = fr.origin_d + off;
  int sx;
  if (sgn(fr.origin) == 0) sx = sign_of(off);
  else if (std::fabs(off) < 0.5 * std::fabs(fr.origin_d)) sx = sgn(fr.origin);
  else sx = sign_of(x);
  if (parts) {
    parts->psi.assign(stage, 0.0);
    parts->theta.assign(stage, 0.0);
    parts->base = 0.0;
  }
  if (sx == 0) return 0.0;

  double v = kappa_d_ * base_primitive(x) + constant_d_ * x;
  mag += std::fabs(v);
  if (parts) parts->base = v;
  const Frame& zero = anchor_frames_[0];
  for (std::size_t n = 0; n < stage; ++n) {
    const Layer& L = layers_[n];
    const auto& ka = kernel_anchor_[n];
    double p = 0.0;
    for (std::size_t k = 0; k < L.psi.size(); ++k)
      p += L.psi[k].integral_offsets(zero.dist[ka[k]], fr.dist[ka[k]] + off);
    double th = 0.0;
    if (L.clipped) {
      for (const auto& piece : regions_[n]) {
        if (piece.side != sx) continue;
        double oa = off + fr.dist[piece.anchor];
        const Frame& af = anchor_frames_[piece.anchor];
        if (sx > 0) {
          if (piece.hi <= oa) th += piece.mass;
          else if (piece.lo < oa) th += std::max(0.0, psi_span(n, af, piece.lo, oa) - local(af, piece.lo, oa, n, mag));
        } else {
          if (piece.lo >= oa) th -= piece.mass;
          else if (piece.hi > oa) th -= std::max(0.0, psi_span(n, af, oa, piece.hi) - local(af, oa, piece.hi, n, mag));
        }
      }
      th += eps_d_[n] * base_primitive(x);
    }
    if (!L.bump.empty()) th += L.bump.integral(0.0, x);
    v += th - p;
    mag += std::fabs(p) + std::fabs(th);
    if (parts) {
      parts->psi[n] = -p;
      parts->theta[n] = th;
    }
  }
  return v;
}

Estimate FuncRep::g(const Frame& fr, double off, std::size_t stage) const {
  if (stage > stages()) throw Error(ErrorKind::PreconditionViolated, "stage beyond the stored layers");
  if (fr.dist.size() != anchors_.size()) throw Error(ErrorKind::PreconditionViolated, "frame from another representation");
  double x = fr.origin_d + off;
  double b = base_shape(x);
  double v = kappa_d_ * b + constant_d_;
  double err = 4.0 * kUlp * std::fabs(v);
  for (std::size_t n = 0; n < stage; ++n) {
    const Layer& L = layers_[n];
    double p = psi_at(n, fr, off);
    double pe = 4.0 * kUlp * p * static_cast<double>(L.psi.size() + 1);
    double diff = v - p;
    err += pe + 2.0 * kUlp * (std::fabs(v) + p);
    if (L.clipped) {
      // A clearly negative difference clips to an exact zero.
      if (diff + err < 0) {
        v = 0.0;
        err = 0.0;
      } else {
        v = std::max(diff, 0.0);
      }
      double eb = eps_d_[n] * b;
      v += eb;
      err += 4.0 * kUlp * eb;
    } else {
      v = diff;
    }
    if (!L.bump.empty()) {
      double t = L.bump(x);
      v += t;
      err += 8.0 * kUlp * std::fabs(t);
    }
  }
  return {v, err};
}

Estimate FuncRep::g(const Rational& x, std::size_t stage) const { return g(frame(x), 0.0, stage); }

double FuncRep::g_at(double x, std::size_t stage) const { return g(anchor_frames_[0], x, stage).value; }

Estimate FuncRep::f(const Frame& fr, double off, std::size_t stage) const {
  if (stage > stages()) throw Error(ErrorKind::PreconditionViolated, "stage beyond the stored layers");
  if (fr.dist.size() != anchors_.size()) throw Error(ErrorKind::PreconditionViolated, "frame from another representation");
  double mag = 0.0;
  double v = global_f(fr, off, stage, mag, nullptr);
  return {v, 16.0 * kUlp * mag + 1e-300};
}

Estimate FuncRep::f(const Rational& x, std::size_t stage) const { return f(frame(x), 0.0, stage); }

Estimate FuncRep::f_at(double x, std::size_t stage) const { return f(anchor_frames_[0], x, stage); }

Estimate FuncRep::local_increment(const Frame& fr, double o0, double o1, std::size_t stage) const {
  if (stage > stages()) throw Error(ErrorKind::PreconditionViolated, "stage beyond the stored layers");
  double mag = 0.0;
  double v = local(fr, o0, o1, stage, mag);
  return {v, 16.0 * kUlp * mag + 1e-300};
}

Estimate FuncRep::increment(const Rational& x0, const Rational& x1, std::size_t stage) const {
  Rational d = x1 - x0;
  if (abs(d) < pow2(-16)) return local_increment(frame(x0), 0.0, to_double(d), stage);
  Estimate a = f(x0, stage), b = f(x1, stage);
  return {b.value - a.value, a.err + b.err};
}

FuncRep::Telescoped FuncRep::telescoped(const Rational& x, std::size_t stage) const {
  Telescoped t;
  double mag = 0.0;
  global_f(frame(x), 0.0, stage, mag, &t);
  return t;
}

Rational FuncRep::sup_norm_bound(std::size_t stage) const {
  Rational bound = kappa_ + (sgn(constant_) > 0 ? constant_ : Rational(0));
  for (std::size_t n = 0; n < stage && n < layers_.size(); ++n) {
    if (layers_[n].clipped) bound += layers_[n].eps;
    bound += layers_[n].bump.height();
  }
  return bound;
}

double FuncRep::theta_norm_estimate(std::size_t n) const {
  const Layer& L = layers_.at(n);
  double peak = 0.0;
  if (L.clipped)
    for (const auto& piece : regions_[n]) peak = std::max(peak, piece.peak);
  return peak + eps_d_[n] + to_double(L.bump.height());
}

Rational FuncRep::limit_at_infinity(std::size_t stage) const {
  Rational v = kappa_ + constant_;
  for (std::size_t n = 0; n < stage && n < layers_.size(); ++n)
    if (layers_[n].clipped) v += layers_[n].eps;
  return v;
}

void FuncRep::locate_regions(std::size_t n) {
  std::vector<std::size_t> order(anchors_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return anchors_[i] < anchors_[j]; });

  auto h = [&](const Frame& fr, double u) { return psi_at(n, fr, u) - g(fr, u, n).value; };
  // Start the scan well inside the narrowest kernel of any layer so far.
  double rmax = 1.0;
  for (std::size_t m = 0; m <= n; ++m)
    for (const auto& k : layers_[m].psi) rmax = std::max(rmax, k.rd());
  int min_log2 = std::min(kScanMinLog2, -static_cast<int>(std::ceil(std::log2(rmax))) - 48);
  std::vector<RegionPiece> pieces;

  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    std::size_t a = order[pos];
    const Frame& fr = anchor_frames_[a];
    for (int dir : {-1, 1}) {
      bool outer = (dir < 0 && pos == 0) || (dir > 0 && pos + 1 == order.size());
      double half;
      if (outer) half = kOuterReach;
      else {
        std::size_t nb = order[dir < 0 ? pos - 1 : pos + 1];
        half = 0.5 * std::fabs(to_double(anchors_[nb] - anchors_[a]));
      }
      // Samples at increasing distance from the anchor.
      std::vector<double> dists{0.0};
      for (int j = 0;; ++j) {
        double d = std::ldexp(std::exp2(static_cast<double>(j % kScanPerOctave) / kScanPerOctave),
                              min_log2 + j / kScanPerOctave);
        if (d >= half) break;
        dists.push_back(d);
      }
      dists.push_back(half);
      std::vector<double> hv(dists.size());
      for (std::size_t i = 0; i < dists.size(); ++i) hv[i] = h(fr, dir * dists[i]);
      if (outer && hv.back() > 0)
        throw Error(ErrorKind::CrossingIsolationFailure, "psi exceeds g far from every center");

      auto crossing = [&](double in, double out) {
        // h(dir*in) > 0 >= h(dir*out); returns the boundary distance.
        for (int it = 0; it < 200; ++it) {
          double mid = 0.5 * (in + out);
          if (mid == in || mid == out) break;
          if (h(fr, dir * mid) > 0) in = mid;
          else out = mid;
        }
        return in;
      };

      std::size_t i = 0;
      while (i < dists.size()) {
        if (!(hv[i] > 0)) {
          ++i;
          continue;
        }
        std::size_t j = i;
        double peak = hv[i];
        while (j + 1 < dists.size() && hv[j + 1] > 0) peak = std::max(peak, hv[++j]);
        double start = i == 0 ? 0.0 : crossing(dists[i], dists[i - 1]);
        double stop = j + 1 == dists.size() ? dists[j] : crossing(dists[j], dists[j + 1]);
        if (stop > start) {
          RegionPiece piece{a, 0, 0, 0, 0.0, peak};
          piece.lo = dir > 0 ? start : -stop;
          piece.hi = dir > 0 ? stop : -start;
          piece.side = sgn(anchors_[a]) != 0 ? sgn(anchors_[a]) : dir;
          double mag = 0.0;
          piece.mass = std::max(0.0, psi_span(n, fr, piece.lo, piece.hi) - local(fr, piece.lo, piece.hi, n, mag));
          pieces.push_back(piece);
        }
        i = j + 1;
      }
    }
  }
  regions_[n] = std::move(pieces);
}

}  // namespace edif
