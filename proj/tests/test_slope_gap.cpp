#include <doctest.h>

#include <random>

#include "edif/error.hpp"
#include "edif/slope_gap.hpp"

using namespace edif;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidInput;
}

Rational frac(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

// Leaf membership by scanning every leaf interval.
std::optional<std::size_t> scan_leaf(const BoxTree& t, const Rational& v, bool h_side) {
  std::size_t D = t.depth();
  for (std::size_t i = 0; i < (std::size_t{1} << D); ++i) {
    Rational lo = h_side ? t.a(D, i) : t.c(D, i);
    Rational hi = h_side ? t.b(D, i) : t.d(D, i);
    if (lo <= v && v <= hi) return i;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("geometric bounds match the closed form") {
  for (long R : {3L, 5L, 10L, 100L}) {
    BoxSchedule s = BoxSchedule::geometric(R, 5);
    for (std::size_t n = 0; n + 1 < 5; ++n) {
      SlopeBounds b = slope_bounds(s, n);
      // Self-similar: small = R / (R^2 - 2), large = R - 2/R at every level.
      CHECK(b.small_max == frac(R, R * R - 2));
      CHECK(b.large_min == frac(R * R - 2, R));
    }
  }
  SlopeBounds ten = slope_bounds(BoxSchedule::geometric(10, 3), 1);
  CHECK(ten.small_max == Rational(5, 49));
  CHECK(ten.large_min == Rational(49, 5));
}

TEST_CASE("schedule validation") {
  BoxSchedule bad = BoxSchedule::geometric(10, 4);
  bad.q[1] = bad.p[1];
  CHECK(kind_of([&] { bad.validate(3); }) == ErrorKind::ScheduleViolation);
  BoxSchedule shortened = BoxSchedule::geometric(10, 2);
  CHECK(kind_of([&] { shortened.validate(3); }) == ErrorKind::ScheduleViolation);
  CHECK_NOTHROW(BoxSchedule::accelerating(4, 5).validate(4));
  CHECK(kind_of([] { BoxSchedule::geometric(2, 3); }) == ErrorKind::InvalidInput);
}

TEST_CASE("depth zero tree is a single box") {
  BoxTree t = build_pair(BoxSchedule::geometric(10, 1), 0);
  CHECK(t.a(0, 0) == 0);
  CHECK(t.b(0, 0) == 1);
  CHECK(t.d(0, 0) == Rational(1, 10));
  CHECK(corner_points(t).size() == 4);
  CHECK(kind_of([&] { classify_pair(t, {0, 0}, {1, Rational(1, 10)}); }) == ErrorKind::SameLeaf);
}

TEST_CASE("exhaustive corner classification") {
  for (auto sched : {BoxSchedule::geometric(10, 4), BoxSchedule::accelerating(3, 4)}) {
    BoxTree t = build_pair(sched, 3);
    std::vector<PlanePoint> pts = corner_points(t);
    std::size_t small = 0, large = 0;
    for (std::size_t u = 0; u < pts.size(); ++u)
      for (std::size_t v = u + 1; v < pts.size(); ++v) {
        const auto& a = pts[u];
        const auto& b = pts[v];
        if (a.x == b.x || a.y == b.y) continue;
        auto ha = scan_leaf(t, a.x, true), hb = scan_leaf(t, b.x, true);
        auto ka = scan_leaf(t, a.y, false), kb = scan_leaf(t, b.y, false);
        REQUIRE((ha && hb && ka && kb));
        if (*ha == *hb && *ka == *kb) continue;
        Classification c = classify_pair(t, a, b);
        CHECK(c.within_bound);
        // Oracle class: a small slope exactly when the H leaves split first.
        std::size_t D = t.depth(), sh = D, sk = D;
        for (std::size_t n = 0; n < D; ++n)
          if (sh == D && (*ha >> (D - 1 - n)) != (*hb >> (D - 1 - n))) sh = n;
        for (std::size_t n = 0; n < D; ++n)
          if (sk == D && (*ka >> (D - 1 - n)) != (*kb >> (D - 1 - n))) sk = n;
        CHECK(c.level == std::min(sh, sk));
        CHECK((c.cls == SlopeClass::Small) == (sh <= sk));
        (c.cls == SlopeClass::Small ? small : large)++;
      }
    CHECK(small > 0);
    CHECK(large > 0);
  }
}

TEST_CASE("classification is translation invariant") {
  BoxTree t = build_pair(BoxSchedule::geometric(5, 4), 3);
  BoxTree moved = t.translated(Rational(7, 3), Rational(-11, 2));
  std::vector<PlanePoint> pts = corner_points(t);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 500; ++k) {
    const auto& a = pts[rng() % pts.size()];
    const auto& b = pts[rng() % pts.size()];
    if (a.x == b.x || a.y == b.y) continue;
    if (scan_leaf(t, a.x, true) == scan_leaf(t, b.x, true) && scan_leaf(t, a.y, false) == scan_leaf(t, b.y, false))
      continue;
    Classification c0 = classify_pair(t, a, b);
    Classification c1 =
        classify_pair(moved, {a.x + Rational(7, 3), a.y - Rational(11, 2)}, {b.x + Rational(7, 3), b.y - Rational(11, 2)});
    CHECK(c0.cls == c1.cls);
    CHECK(c0.level == c1.level);
    CHECK(c0.slope == c1.slope);
  }
  CHECK(kind_of([&] { classify_pair(t, {Rational(1, 2), 0}, {0, Rational(1, 10)}); }) == ErrorKind::NotInTree);
}

TEST_CASE("epsilon delta") {
  BoxSchedule acc = BoxSchedule::accelerating(3, 6);
  auto ed = epsilon_delta(acc, Rational(1, 20));
  REQUIRE(ed);
  for (std::size_t n = ed->level; n + 1 < acc.levels(); ++n) {
    SlopeBounds b = slope_bounds(acc, n);
    CHECK(b.small_max < Rational(1, 20));
    CHECK(b.large_min > 20);
  }
  CHECK(sgn(ed->delta) > 0);
  // Geometric ratios never beat an epsilon below R / (R^2 - 2).
  CHECK_FALSE(epsilon_delta(BoxSchedule::geometric(10, 6), Rational(1, 20)));
  CHECK(epsilon_delta(BoxSchedule::geometric(10, 6), Rational(1, 5)));
}
