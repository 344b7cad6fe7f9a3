#include "edif/flat_coding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "edif/error.hpp"

namespace edif {

TinyFamily TinyFamily::constant(std::uint64_t c) {
  TinyFamily f;
  f.kind_ = Kind::Constant;
  f.c_int_ = c;
  return f;
}

TinyFamily TinyFamily::polylog(double c, unsigned a) {
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidInput, "polylog family needs c > 0");
  TinyFamily f;
  f.kind_ = Kind::PolyLog;
  f.c_ = c;
  f.a_ = a;
  return f;
}

TinyFamily TinyFamily::power(const TinyFamily& inner, unsigned r) {
  TinyFamily f;
  f.kind_ = Kind::Power;
  f.a_ = r;
  f.inner_ = std::make_shared<TinyFamily>(inner);
  return f;
}

TinyFamily TinyFamily::shift(const TinyFamily& inner, unsigned r) {
  TinyFamily f;
  f.kind_ = Kind::Shift;
  f.a_ = r;
  f.inner_ = std::make_shared<TinyFamily>(inner);
  return f;
}

std::uint64_t TinyFamily::operator()(std::uint64_t k) const {
  switch (kind_) {
    case Kind::Constant:
      return c_int_;
    case Kind::PolyLog:
      return static_cast<std::uint64_t>(std::ceil(c_ * std::pow(std::log2(static_cast<double>(k) + 2.0), a_)));
    case Kind::Power: {
      std::uint64_t base = (*inner_)(k);
      std::uint64_t out = 1;
      for (unsigned n = 0; n < a_; ++n) {
        if (base != 0 && out > UINT64_MAX / base) return UINT64_MAX;
        out *= base;
      }
      return out;
    }
    case Kind::Shift:
      return a_ + (*inner_)(k + a_);
  }
  return 0;
}

std::vector<std::uint64_t> TinyFamily::values(std::uint64_t kmax) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 0; k <= kmax; ++k) out.push_back((*this)(k));
  return out;
}

std::string TinyFamily::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Constant: os << c_int_; break;
    case Kind::PolyLog: os << "ceil(" << c_ << "*log2(k+2)^" << a_ << ")"; break;
    case Kind::Power: os << "(" << inner_->describe() << ")^" << a_; break;
    case Kind::Shift: os << a_ << "+[" << inner_->describe() << "](k+" << a_ << ")"; break;
  }
  return os.str();
}

bool TinyProfile::matches_family() const {
  if (!family) return true;
  for (std::size_t k = 0; k < values.size(); ++k)
    if (values[k] != (*family)(k)) return false;
  return true;
}

TernaryPoint encode(std::uint64_t i, const CodePrefix& s, const TernaryPoint& x, const BlockSchedule& sched,
                    std::size_t depth) {
  if (depth == 0) throw Error(ErrorKind::InvalidInput, "encode depth must be >= 1");
  if (depth > sched(sched.levels() - 1))
    throw Error(ErrorKind::InsufficientDepth, "depth beyond the stored block schedule");
  DigitWord z(depth, 0);
  for (std::size_t n = 0; n < depth; ++n) {
    if (n < s.length()) {
      z[n] = s.symbols[n];
      continue;
    }
    std::size_t k = sched.level_of(n);
    std::uint64_t j = n - sched(k);
    z[n] = block_digit(x, static_cast<long>(k) - 2, pair_phi(i, j), sched);
  }
  return TernaryPoint(std::move(z));
}

DecodeResult decode(const std::vector<TernaryPoint>& ys, const BlockSchedule& sched, std::size_t depth) {
  if (ys.empty()) throw Error(ErrorKind::InvalidInput, "decode needs at least one target");
  // depth must be Gamma(K) for a stored K >= 2.
  std::size_t K = 0;
  while (K < sched.levels() && sched(K) < depth) ++K;
  if (K >= sched.levels() || sched(K) != depth || K < 2)
    throw Error(ErrorKind::InvalidInput, "decode depth must equal Gamma(K) for some stored K >= 2");
  for (const auto& y : ys)
    if (y.depth() < depth) throw Error(ErrorKind::InsufficientDepth, "target shorter than decode depth");

  const std::size_t m = ys.size();
  // x carries blocks 0..K-3; z's block k reads x's block k-2.
  const std::size_t xblocks = K - 2;
  std::vector<std::vector<std::uint64_t>> ells(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < K; ++k) ells[i].push_back(ell(ys[i], k, sched));

  DecodeResult out{TernaryPoint::zeros(std::max<std::size_t>(1, sched(xblocks))), {}, {}, {}, 0};
  DigitWord xd(std::max<std::size_t>(1, sched(xblocks)), 0);
  for (std::size_t k = 0; k < xblocks; ++k) {
    std::uint64_t demand = 0;
    for (std::size_t i = 0; i < m; ++i) {
      std::uint64_t t = i + ells[i][k + 2];
      demand = std::max(demand, t * t);
    }
    std::uint64_t psi = std::min(sched.block_length(k), demand);
    out.psi.push_back(psi);
    for (std::uint64_t pos = 0; pos < psi; ++pos) {
      auto [i, j] = unpair_phi(pos);
      if (i >= m) continue;
      xd[sched(k) + pos] = block_digit(ys[i], static_cast<long>(k) + 2, j, sched);
    }
  }
  out.x = TernaryPoint(std::move(xd));

  for (std::size_t i = 0; i < m; ++i) {
    // r_i: least r with psi(k) >= (i + l^{y_i}_{k+2})^2 for all k in [r, xblocks).
    std::size_t r = xblocks;
    while (r > 0) {
      std::uint64_t t = i + ells[i][r - 1 + 2];
      if (out.psi[r - 1] >= t * t) --r;
      else break;
    }
    if (r + 2 > K)
      throw Error(ErrorKind::DepthExhausted, "no coded block left for target " + std::to_string(i));
    out.thresholds.push_back(r);
    auto prefix_len = static_cast<std::ptrdiff_t>(sched(r + 2));
    auto dig = ys[i].digits();
    out.shifts.push_back(CodePrefix{DigitWord(dig.begin(), dig.begin() + prefix_len)});
  }

  for (std::size_t i = 0; i < m; ++i) {
    TernaryPoint z = encode(i, out.shifts[i], out.x, sched, depth);
    auto dig = ys[i].digits();
    TernaryPoint yi(DigitWord(dig.begin(), dig.begin() + static_cast<std::ptrdiff_t>(depth)));
    if (!(z == yi))
      throw Error(ErrorKind::DepthExhausted, "round trip failed for target " + std::to_string(i));
  }
  out.verified_depth = depth;
  return out;
}

std::size_t FlatnessReport::total_violations() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.violations;
  return n;
}

std::string FlatnessReport::to_json() const {
  nlohmann::json rows_j = nlohmann::json::array();
  for (const auto& r : rows)
    rows_j.push_back({{"k", r.k}, {"exponent", r.exponent.get_str()}, {"pairs", r.pairs}, {"violations", r.violations}});
  nlohmann::json j{{"i", i}, {"q", q}, {"k0", k0}, {"rows", rows_j}, {"violations", total_violations()}};
  return j.dump();
}

BigInt gamma_big(const BlockSchedule& sched, std::size_t k) {
  if (k < sched.levels()) return BigInt(static_cast<unsigned long>(sched(k)));
  BigInt g(static_cast<unsigned long>(sched(sched.levels() - 1)));
  for (std::size_t n = sched.levels() - 1; n < k; ++n) g = std::max<BigInt>(g + 1, g * g);
  return g;
}

BigInt flatness_exponent(const BlockSchedule& sched, std::size_t k, std::size_t q) {
  return -gamma_big(sched, k + 2) + 1 + BigInt(static_cast<unsigned long>(q)) * gamma_big(sched, k + 1);
}

FlatnessReport flatness_certificate(std::uint64_t i, const CodePrefix& s, std::size_t q, std::size_t kmax,
                                    const BlockSchedule& sched, std::size_t depth, std::size_t pairs,
                                    std::mt19937_64& rng) {
  if (q < 1) throw Error(ErrorKind::InvalidInput, "flatness order q must be >= 1");
  FlatnessReport rep{i, q, {}, 0};
  for (std::size_t k = 0; k <= kmax; ++k) rep.rows.push_back({k, flatness_exponent(sched, k, q), 0, 0});

  std::size_t k0 = rep.rows.size();
  for (std::size_t k = rep.rows.size(); k-- > 0;) {
    bool neg = sgn(rep.rows[k].exponent) < 0;
    bool dec = (k + 1 == rep.rows.size()) || rep.rows[k + 1].exponent < rep.rows[k].exponent;
    if (neg && dec) k0 = k;
    else break;
  }
  rep.k0 = k0;

  std::vector<std::size_t> levels;
  for (std::size_t k = 0; k <= kmax && k + 2 < sched.levels(); ++k)
    if (sched(k + 2) <= depth) levels.push_back(k);
  if (levels.empty() || pairs == 0) return rep;

  std::uniform_int_distribution<int> bit(0, 1);
  for (std::size_t t = 0; t < pairs; ++t) {
    std::size_t k = levels[t % levels.size()];
    std::uniform_int_distribution<std::uint64_t> pick(sched(k), sched(k + 1) - 1);
    std::uint64_t n = pick(rng);
    DigitWord xd(depth), yd(depth);
    for (std::size_t a = 0; a < depth; ++a) {
      xd[a] = static_cast<Digit>(2 * bit(rng));
      yd[a] = a < n ? xd[a] : static_cast<Digit>(2 * bit(rng));
    }
    yd[n] = static_cast<Digit>(2 - xd[n]);
    TernaryPoint x(std::move(xd)), y(std::move(yd));
    TernaryPoint zx = encode(i, s, x, sched, depth);
    TernaryPoint zy = encode(i, s, y, sched, depth);
    ++rep.rows[k].pairs;
    if (zx == zy) continue;  // agree on every stored digit, so delta >= depth >= Gamma(k+2)
    if (delta(zx, zy) < sched(k + 2)) ++rep.rows[k].violations;
  }
  return rep;
}

std::vector<std::uint64_t> ell_profile(const TernaryPoint& x, const BlockSchedule& sched) {
  std::vector<std::uint64_t> out;
  for (std::size_t k = 0; k + 1 < sched.levels() && sched(k + 1) <= x.depth(); ++k) out.push_back(ell(x, k, sched));
  return out;
}

bool in_T_surrogate(const TernaryPoint& x, const BlockSchedule& sched, const TinyFamily& family) {
  auto prof = ell_profile(x, sched);
  for (std::size_t k = 0; k < prof.size(); ++k)
    if (prof[k] > family(k)) return false;
  return true;
}

TernaryPoint random_tiny_point(const BlockSchedule& sched, std::size_t depth, const TinyFamily& family,
                               std::mt19937_64& rng) {
  DigitWord d(depth, 0);
  std::uniform_int_distribution<int> bit(0, 1);
  for (std::size_t k = 0; k + 1 < sched.levels() && sched(k) < depth; ++k) {
    std::uint64_t len = std::min<std::uint64_t>(sched.block_length(k), depth - sched(k));
    std::uint64_t lim = std::min<std::uint64_t>(len, family(k));
    for (std::uint64_t j = 0; j < lim; ++j) d[sched(k) + j] = static_cast<Digit>(2 * bit(rng));
  }
  return TernaryPoint(std::move(d));
}

}  // namespace edif
