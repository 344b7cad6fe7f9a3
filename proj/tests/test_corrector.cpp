#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "edif/corrector.hpp"
#include "edif/error.hpp"

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

}  // namespace

TEST_CASE("correctability against the base stage") {
  FuncRep rep;
  PairList tau{{0, 0}, {1, frac(3, 10)}};
  CorrectabilityReport r = correctable_check(tau, rep, 0, frac(1, 8));
  CHECK(r.ok());
  REQUIRE(r.gaps.size() == 1);
  // Slack over [0, 1] is 0.3 - (1 - pi/4).
  CHECK(r.gaps[0].slack == doctest::Approx(0.3 - (1 - std::numbers::pi / 4)).epsilon(1e-14));
  CHECK(r.gaps[0].slack == doctest::Approx(0.08540).epsilon(1e-4));

  CHECK_FALSE(correctable_check({{0, 0}, {1, frac(9, 10)}}, rep, 0, frac(1, 8)).ok());
  CHECK_FALSE(correctable_check({{0, 0}, {1, frac(1, 10)}}, rep, 0, frac(1, 8)).ok());
  CHECK_FALSE(correctable_check({{1, 1}, {2, 3}}, rep, 0, 1).ok());
}

TEST_CASE("bump realizes the mass exactly") {
  MassPlan plan{{0, 1}, {frac(1, 1000)}, frac(1, 100), {}};
  PiecewiseBump b = build_bump(plan);
  CHECK(b.exact_integral(0, 1) == frac(1, 1000));
  CHECK(b.height() < frac(1, 100));
  CHECK(b.height() <= frac(4, 1000));
  CHECK(b.integral(0.0, 1.0) == doctest::Approx(1e-3).epsilon(1e-13));
  for (int i = -10; i <= 1010; ++i) {
    double x = i / 1000.0, v = b(x);
    CHECK(v >= 0);
    CHECK(v <= to_double(b.height()) * (1 + 1e-15));
    if (x <= 0 || x >= 1) CHECK(v == 0);
  }
  // Piece integrals add up to the exact total.
  Rational sum = 0;
  for (const auto& p : b.pieces()) sum += PiecewiseBump::piece_integral(p);
  CHECK(sum == frac(1, 1000));
}

TEST_CASE("mass limits and pins") {
  Rational iota = frac(1, 100);
  CHECK(kind_of([&] { build_bump({{0, 2}, {iota * 2}, iota, {}}); }) == ErrorKind::MassOutOfRange);
  CHECK(kind_of([&] { build_bump({{0, 2}, {0}, iota, {}}); }) == ErrorKind::MassOutOfRange);
  CHECK(kind_of([&] { build_bump({{0, 2}, {frac(1, 1000)}, 0, {}}); }) == ErrorKind::InvalidInput);

  PiecewiseBump pinned = build_bump({{0, 2}, {frac(1, 1000)}, iota, {frac(1, 2)}});
  CHECK(pinned(0.5) == 0);
  CHECK(pinned.exact_integral(0, 2) == frac(1, 1000));
  // Both sides of the pin carry mass in proportion to their width.
  double left = pinned.integral(0.0, 0.5), right = pinned.integral(0.5, 2.0);
  CHECK(right / left == doctest::Approx(3.0).epsilon(1e-12));

  // A mass just under iota times the usable width still fits, with a taller bump.
  Rational near = iota * (1 - 2 * pin_exclusion_fraction()) * frac(99, 100);
  PiecewiseBump tall = build_bump({{0, 1}, {near}, iota, {}});
  CHECK(tall.exact_integral(0, 1) == near);
  CHECK(tall.height() < iota);
}

TEST_CASE("exact correction telescopes over random triples") {
  FuncRep rep;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> where(-3.0, 3.0), frac_of(0.05, 0.9);
  const Rational iota = frac(1, 16);
  for (int t = 0; t < 10000; ++t) {
    std::vector<Rational> d{0, from_double(where(rng)), from_double(where(rng))};
    std::sort(d.begin(), d.end());
    if (d[0] == d[1] || d[1] == d[2]) continue;
    // e increments: f's increment plus a slack fraction of iota.
    PairList tau;
    std::size_t zero = std::find(d.begin(), d.end(), Rational(0)) - d.begin();
    std::vector<Rational> es(3);
    es[zero] = 0;
    for (std::size_t i = zero + 1; i < 3; ++i)
      es[i] = es[i - 1] + from_double(rep.increment(d[i - 1], d[i], 0).value) + iota * from_double(frac_of(rng)) * (d[i] - d[i - 1]);
    for (std::size_t i = zero; i-- > 0;)
      es[i] = es[i + 1] - from_double(rep.increment(d[i], d[i + 1], 0).value) - iota * from_double(frac_of(rng)) * (d[i + 1] - d[i]);
    for (std::size_t i = 0; i < 3; ++i) tau.emplace_back(d[i], es[i]);

    CorrectabilityReport cr = correctable_check(tau, rep, 0, iota);
    REQUIRE(cr.ok());
    CHECK(cr.all_pairs_ok);
    PiecewiseBump b = build_correction(tau, rep, 0, iota, d);
    FuncRep out = rep.with_layer(Layer{{}, false, 0, b});
    for (std::size_t i = 0; i < 3; ++i) {
      Estimate f = out.f(d[i]);
      CHECK(std::fabs(f.value - to_double(es[i])) < 1e-12 + f.err);
      CHECK(out.g(d[i]).value == doctest::Approx(rep.g(d[i]).value).epsilon(1e-15));
    }
  }
}
