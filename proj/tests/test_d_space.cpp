#include <doctest.h>

#include <cmath>
#include <numbers>

#include "edif/condition.hpp"
#include "edif/d_check.hpp"
#include "edif/error.hpp"
#include "edif/forcing.hpp"
#include "edif/quadrature.hpp"

using namespace edif;

namespace {

const Condition& chain6() {
  static const Condition c = [] {
    Condition p = Condition::trivial();
    for (int k = 0; k < 6; ++k) p = advance(p);
    return p;
  }();
  return c;
}

}  // namespace

TEST_CASE("base stage") {
  FuncRep rep;
  CHECK(rep.f_at(1.0).value == doctest::Approx(1 - std::numbers::pi / 4).epsilon(1e-15));
  CHECK(rep.g_at(0.0) == 0);
  CHECK(rep.g_at(2.0) == doctest::Approx(0.8));
  // Series branch near the origin: x - atan x = x^3/3 - x^5/5 + ...
  double x = 1e-5;
  CHECK(base_primitive(x) == doctest::Approx(x * x * x / 3 - std::pow(x, 5) / 5).epsilon(1e-12));
  CHECK(rep.sup_norm_bound() == 1);
  CHECK(rep.limit_at_infinity(0) == 1);
}

TEST_CASE("advanced chain keeps g bounded and zero at the origin") {
  const Condition& p = chain6();
  REQUIRE(p.N() == 6);
  CHECK(p.rep.g_at(0.0) == doctest::Approx(0.0).epsilon(1e-30));
  CHECK(p.rep.sup_norm_bound() < 2);
  for (std::size_t n = 0; n <= p.N(); ++n) {
    double bound = to_double(p.rep.sup_norm_bound(n));
    for (int i = -200; i <= 200; ++i) {
      double v = p.rep.g_at(i / 32.0, n);
      CHECK(v >= -1e-12);
      CHECK(v <= bound + 1e-12);
    }
  }
}

TEST_CASE("f agrees with pointwise quadrature of g") {
  const Condition& p = chain6();
  for (double x : {-1.5, -0.25, 0.3, 1.0, 2.75}) {
    std::vector<double> breaks;
    for (const auto& a : p.rep.anchors()) {
      double d = to_double(a);
      if (d > std::min(0.0, x) && d < std::max(0.0, x)) breaks.push_back(d);
    }
    QuadResult q = adaptive_simpson([&](double t) { return p.rep.g_at(t); }, 0.0, x, 1e-12, breaks);
    CHECK(p.rep.f_at(x).value == doctest::Approx(q.value).epsilon(1e-8));
  }
}

TEST_CASE("telescoping identity") {
  const Condition& p = chain6();
  for (const Rational& x : {Rational(1, 3), Rational(-7, 4), Rational(5, 2)}) {
    FuncRep::Telescoped t = p.rep.telescoped(x, p.N());
    double sum = t.base;
    for (double v : t.psi) sum += v;
    for (double v : t.theta) sum += v;
    Estimate f = p.rep.f(x);
    CHECK(std::fabs(sum - f.value) <= f.err + 1e-14);
    CHECK(t.psi.size() == p.N());
    CHECK(t.base == doctest::Approx(FuncRep().f(x).value).epsilon(1e-15));
  }
}

TEST_CASE("difference quotients converge to g") {
  const Condition& p = chain6();
  std::vector<double> hs;
  for (int k = 4; k <= 20; k += 2) hs.push_back(std::ldexp(1.0, -k));
  DerivativeReport at0 = derivative_check(p.rep, 0, hs);
  CHECK(at0.final_gap() < std::ldexp(1.0, -38));
  CHECK(at0.pass(std::ldexp(1.0, -30)));
  DerivativeReport away = derivative_check(p.rep, Rational(3, 4), hs);
  CHECK(away.final_gap() < 1e-4);
  CHECK(away.monotone);
  CHECK_THROWS_AS(derivative_check(p.rep, 0, {0.0}), Error);
}

TEST_CASE("finite stage D check") {
  const Condition& p = chain6();
  for (const Rational& x : {Rational(0), Rational(1, 3), Rational(-2)}) {
    DCheckReport r = finite_stage_D_check(p.rep, x, std::ldexp(1.0, -10));
    CHECK(r.ok());
    CHECK(r.delta > 0);
    CHECK(r.m <= p.N());
  }
  // A summand with a jump at x has no continuity radius.
  std::vector<SummandView> jump{{[](double h) { return h > 0 ? 1.0 : 0.0; }, [](double h) { return h > 0 ? h : 0.0; }}};
  CHECK_FALSE(finite_stage_D_check(jump, 1e-3).ok());
  // Smooth summands pass.
  std::vector<RealFunction> fs{make_function({KSKernel(1, 1, 0)}), make_function({KSKernel(Rational(1, 2), 8, 1)})};
  CHECK(finite_stage_D_check(views_at(fs, 0.2), 1e-3).ok());
  CHECK_THROWS_AS(finite_stage_D_check(jump, 0.0), Error);
}
