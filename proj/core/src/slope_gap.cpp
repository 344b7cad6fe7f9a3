#include "edif/slope_gap.hpp"

#include <json.hpp>

#include "edif/error.hpp"

namespace edif {

namespace {

Rational rpow(long base, long e) {
  Rational b(base);
  if (e >= 0) return Rational(ipow(base, static_cast<unsigned long>(e)));
  Rational q(BigInt(1), ipow(base, static_cast<unsigned long>(-e)));
  q.canonicalize();
  return q;
}

[[noreturn]] void violation(const std::string& what, std::size_t level) {
  throw Error(ErrorKind::ScheduleViolation, what + " at level " + std::to_string(level));
}

std::optional<std::size_t> find_leaf(const std::vector<std::vector<Rational>>& left, const std::vector<Rational>& len,
                                     std::size_t depth, const Rational& x) {
  if (x < left[0][0] || x > left[0][0] + len[0]) return std::nullopt;
  std::size_t idx = 0;
  for (std::size_t n = 0; n < depth; ++n) {
    std::size_t lo = 2 * idx, hi = 2 * idx + 1;
    if (x <= left[n + 1][lo] + len[n + 1]) idx = lo;
    else if (x >= left[n + 1][hi]) idx = hi;
    else return std::nullopt;  // in the removed middle
  }
  return idx;
}

}  // namespace

BoxSchedule BoxSchedule::geometric(long ratio, std::size_t levels) {
  if (ratio < 3) throw Error(ErrorKind::InvalidInput, "geometric ratio must be >= 3");
  BoxSchedule s;
  for (std::size_t n = 0; n < levels; ++n) {
    s.p.push_back(rpow(ratio, -2 * static_cast<long>(n)));
    s.q.push_back(rpow(ratio, -2 * static_cast<long>(n) - 1));
  }
  return s;
}

BoxSchedule BoxSchedule::accelerating(long ratio, std::size_t levels) {
  if (ratio < 3) throw Error(ErrorKind::InvalidInput, "accelerating ratio must be >= 3");
  BoxSchedule s;
  for (std::size_t n = 0; n < levels; ++n) {
    long m = static_cast<long>(n) + 1;
    s.p.push_back(rpow(ratio, 1 - m * m));
    s.q.push_back(rpow(ratio, 1 - m * m - m));
  }
  return s;
}

void BoxSchedule::validate(std::size_t depth) const {
  if (p.size() != q.size()) throw Error(ErrorKind::ScheduleViolation, "p and q differ in length");
  if (p.size() < depth + 1) violation("schedule shorter than depth + 1", p.size());
  for (std::size_t n = 0; n <= depth; ++n) {
    if (sgn(q[n]) <= 0) violation("q_n > 0", n);
    if (!(p[n] > q[n])) violation("p_n > q_n", n);
    if (n + 1 <= depth) {
      if (!(q[n] > p[n + 1])) violation("q_n > p_{n+1}", n);
      if (!(2 * p[n + 1] < p[n])) violation("2 p_{n+1} < p_n", n);
      if (!(2 * q[n + 1] < q[n])) violation("2 q_{n+1} < q_n", n);
      if (q[n + 1] / p[n + 1] > q[n] / p[n]) violation("q_n/p_n non-increasing", n);
      if (n + 2 <= depth && p[n + 2] / q[n + 1] > p[n + 1] / q[n]) violation("p_{n+1}/q_n non-increasing", n);
    }
  }
}

BoxTree build_pair(const BoxSchedule& sched, std::size_t depth) {
  sched.validate(depth);
  BoxTree t;
  t.sched_ = sched;
  t.depth_ = depth;
  t.h_left_.push_back({Rational(0)});
  t.k_left_.push_back({Rational(0)});
  for (std::size_t n = 0; n < depth; ++n) {
    std::vector<Rational> hl, kl;
    for (std::size_t i = 0; i < t.h_left_[n].size(); ++i) {
      const Rational& a = t.h_left_[n][i];
      hl.push_back(a);
      hl.push_back(a + sched.p[n] - sched.p[n + 1]);
      const Rational& c = t.k_left_[n][i];
      kl.push_back(c);
      kl.push_back(c + sched.q[n] - sched.q[n + 1]);
    }
    t.h_left_.push_back(std::move(hl));
    t.k_left_.push_back(std::move(kl));
  }
  // Nesting a_s = a_{s0} < b_{s0} < a_{s1} < b_{s1} = b_s on both sides.
  for (std::size_t n = 0; n < depth; ++n)
    for (std::size_t i = 0; i < t.h_left_[n].size(); ++i) {
      if (!(t.b(n + 1, 2 * i) < t.a(n + 1, 2 * i + 1)) || t.b(n + 1, 2 * i + 1) != t.b(n, i))
        violation("H nesting", n);
      if (!(t.d(n + 1, 2 * i) < t.c(n + 1, 2 * i + 1)) || t.d(n + 1, 2 * i + 1) != t.d(n, i))
        violation("K nesting", n);
    }
  return t;
}

std::optional<std::size_t> BoxTree::h_leaf(const Rational& x) const { return find_leaf(h_left_, sched_.p, depth_, x); }
std::optional<std::size_t> BoxTree::k_leaf(const Rational& y) const { return find_leaf(k_left_, sched_.q, depth_, y); }

BoxTree BoxTree::translated(const Rational& s, const Rational& t) const {
  BoxTree out = *this;
  for (auto& lvl : out.h_left_)
    for (auto& a : lvl) a += s;
  for (auto& lvl : out.k_left_)
    for (auto& c : lvl) c += t;
  return out;
}

std::string BoxTree::to_json() const {
  nlohmann::json j;
  j["depth"] = depth_;
  nlohmann::json p = nlohmann::json::array(), q = nlohmann::json::array();
  for (std::size_t n = 0; n <= depth_; ++n) {
    p.push_back(format_rational(sched_.p[n]));
    q.push_back(format_rational(sched_.q[n]));
  }
  j["p"] = p;
  j["q"] = q;
  nlohmann::json h = nlohmann::json::array(), k = nlohmann::json::array();
  for (std::size_t n = 0; n <= depth_; ++n) {
    nlohmann::json hl = nlohmann::json::array(), kl = nlohmann::json::array();
    for (std::size_t i = 0; i < h_left_[n].size(); ++i) {
      hl.push_back({format_rational(a(n, i)), format_rational(b(n, i))});
      kl.push_back({format_rational(c(n, i)), format_rational(d(n, i))});
    }
    h.push_back(hl);
    k.push_back(kl);
  }
  j["H"] = h;
  j["K"] = k;
  return j.dump();
}

SlopeBounds slope_bounds(const BoxSchedule& sched, std::size_t n) {
  if (n + 1 >= sched.levels()) throw Error(ErrorKind::InsufficientDepth, "slope bounds need level n+1");
  Rational den_small = sched.p[n] - 2 * sched.p[n + 1];
  if (sgn(den_small) <= 0 || sgn(sched.p[n + 1]) <= 0)
    throw Error(ErrorKind::DivisionByZero, "degenerate schedule at level " + std::to_string(n));
  Rational small = sched.q[n] / den_small;
  Rational large = (sched.q[n] - 2 * sched.q[n + 1]) / sched.p[n + 1];
  small.canonicalize();
  large.canonicalize();
  return {small, large};
}

Classification classify_pair(const BoxTree& tree, const PlanePoint& p0, const PlanePoint& p1) {
  if (p0.x == p1.x || p0.y == p1.y)
    throw Error(ErrorKind::PreconditionViolated, "points must differ in both coordinates");
  auto h0 = tree.h_leaf(p0.x), h1 = tree.h_leaf(p1.x);
  auto k0 = tree.k_leaf(p0.y), k1 = tree.k_leaf(p1.y);
  if (!h0 || !h1 || !k0 || !k1) throw Error(ErrorKind::NotInTree, "point outside the leaf boxes");
  const std::size_t D = tree.depth();
  auto first_split = [D](std::size_t u, std::size_t v) {
    for (std::size_t n = 0; n < D; ++n) {
      std::size_t shift = D - 1 - n;
      if (((u >> shift) & 1U) != ((v >> shift) & 1U)) return n;
    }
    return D;
  };
  std::size_t sh = first_split(*h0, *h1), sk = first_split(*k0, *k1);
  std::size_t level = std::min(sh, sk);
  if (level == D) throw Error(ErrorKind::SameLeaf, "points share a leaf box");
  Rational slope = abs((p1.y - p0.y) / (p1.x - p0.x));
  slope.canonicalize();
  SlopeBounds bnd = slope_bounds(tree.schedule(), level);
  // H-children differ: one of the four small cases; otherwise same H-child, K differs.
  SlopeClass cls = (sh == level) ? SlopeClass::Small : SlopeClass::Large;
  bool ok = cls == SlopeClass::Small ? slope <= bnd.small_max : slope >= bnd.large_min;
  return {cls, level, slope, ok};
}

std::optional<EpsilonDelta> epsilon_delta(const BoxSchedule& sched, const Rational& eps) {
  if (sgn(eps) <= 0) throw Error(ErrorKind::InvalidInput, "epsilon must be positive");
  if (sched.levels() < 2) return std::nullopt;
  std::size_t last = sched.levels() - 2;
  std::optional<std::size_t> start;
  for (std::size_t n = last + 1; n-- > 0;) {
    SlopeBounds b = slope_bounds(sched, n);
    if (b.small_max < eps && b.large_min * eps > 1) start = n;
    else break;
  }
  if (!start) return std::nullopt;
  // Separation at any level n < start forces |dx| >= p_n - 2p_{n+1} or |dy| >= q_n - 2q_{n+1}.
  Rational delta = sched.p[0];
  for (std::size_t n = 0; n < *start; ++n) {
    delta = std::min<Rational>(delta, sched.p[n] - 2 * sched.p[n + 1]);
    delta = std::min<Rational>(delta, sched.q[n] - 2 * sched.q[n + 1]);
  }
  return EpsilonDelta{*start, delta};
}

std::vector<PlanePoint> corner_points(const BoxTree& tree) {
  std::vector<PlanePoint> pts;
  const std::size_t D = tree.depth();
  std::size_t leaves = std::size_t{1} << D;
  for (std::size_t i = 0; i < leaves; ++i)
    for (std::size_t j = 0; j < leaves; ++j)
      for (int cx = 0; cx < 2; ++cx)
        for (int cy = 0; cy < 2; ++cy)
          pts.push_back({cx ? tree.b(D, i) : tree.a(D, i), cy ? tree.d(D, j) : tree.c(D, j)});
  return pts;
}

const char* to_string(SlopeClass c) { return c == SlopeClass::Small ? "small" : "large"; }

}  // namespace edif
