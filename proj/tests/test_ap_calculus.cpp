#include <doctest.h>

#include <cmath>

#include "edif/average_property.hpp"
#include "edif/error.hpp"

using namespace edif;

namespace {

// Independent oracle: composite Simpson on a fine uniform grid.
double simpson(const std::function<double(double)>& f, double a, double b, int n = 200000) {
  double h = (b - a) / n, s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

double ks(double c, double r, double a, double x) { return c / std::sqrt(1 + r * std::abs(x - a)); }

}  // namespace

TEST_CASE("averages of the basic kernel") {
  KernelSum s{KSKernel(1, 1, 0)};
  RealFunction psi = make_function(s);
  Average av = average(psi, 0, 3);
  CHECK(av.value == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(average(psi, 3, 0).value == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(average(psi, -8, 0).value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(average(constant_function(2.5), -1, 4).value == doctest::Approx(2.5));
  CHECK_THROWS_AS(average(psi, 1, 1), Error);
}

TEST_CASE("closed form integrals agree with quadrature") {
  KernelSum s{KSKernel(Rational(3, 2), 4, Rational(-1, 3)), KSKernel(Rational(1, 5), Rational(1, 7), 2)};
  for (auto [lo, hi] : {std::pair{-3.0, 5.0}, {-0.5, -0.1}, {1.0, 2.0}, {2.5, 40.0}}) {
    auto f = [&](double x) { return ks(1.5, 4, -1.0 / 3, x) + ks(0.2, 1.0 / 7, 2, x); };
    // Split at kinks so Simpson sees smooth pieces.
    double ref = 0, prev = lo;
    for (double k : {-1.0 / 3, 2.0}) {
      if (k > prev && k < hi) {
        ref += simpson(f, prev, k);
        prev = k;
      }
    }
    ref += simpson(f, prev, hi);
    CHECK(integral(s, lo, hi) == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("C-average property of the basic kernel") {
  RealFunction psi = make_function({KSKernel(1, 1, 0)});
  auto pairs = PairSampler(11, 20000, -6, 6).pairs();
  APReport four = check_ap(psi, 4, pairs);
  CHECK(four.ok());
  CHECK(four.checked == pairs.size());
  CHECK(four.worst_raw < 4);
  APReport one = check_ap(psi, 1, pairs);
  CHECK_FALSE(one.ok());
  CHECK(one.worst_raw > 1.9);

  SymmetricReport sym = check_symmetric_sufficient(psi, 2, 0, PairSampler(12, 5000, -6, 6).magnitudes());
  CHECK(sym.ok());
}

TEST_CASE("one-sided ratio") {
  CHECK(ks_one_sided_ratio(3) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(ks_one_sided_ratio(8) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(ks_one_sided_ratio(1e-6) == doctest::Approx(1 + 1e-6 / 4 - 1e-12 / 8).epsilon(1e-15));
  // Oracle from the primitive: AV_0^b / psi(b) with b = t.
  for (double t : {1e-3, 0.5, 2.0, 1e3, 1e9}) {
    double av = 2 * (std::sqrt(1 + t) - 1) / t;
    CHECK(ks_one_sided_ratio(t) == doctest::Approx(av * std::sqrt(1 + t)).epsilon(1e-12));
    CHECK(ks_one_sided_ratio(t) < 2);
  }
}

TEST_CASE("affine images") {
  KernelSum s{KSKernel(2, 3, 1)};
  KernelSum t = affine(s, Rational(1, 2), 4, -2);
  for (double x : {-3.0, 0.0, 0.5, 0.75, 2.0}) CHECK(eval(t, x) == doctest::Approx(0.5 * eval(s, 4 * x - 2)).epsilon(1e-14));
  KernelSum flipped = affine(s, 1, -2, 0);
  for (double x : {-3.0, -0.5, 0.0, 1.0}) CHECK(eval(flipped, x) == doctest::Approx(eval(s, -2 * x)).epsilon(1e-14));
  CHECK(affine(s, 0, 1, 0).empty());
  try {
    affine(s, -1, 1, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NegativeAmplitude);
  }
  CHECK_THROWS_AS(affine(s, 1, 0, 0), Error);
  // Scaling keeps the C-average property with the same constant.
  auto pairs = PairSampler(3, 5000, -4, 4, {0.75}).pairs();
  CHECK(check_ap(make_function(t), 4, pairs).ok());
}
