#pragma once

#include <vector>

#include "edif/rational.hpp"

namespace edif {

/// x -> c (1 + r|x - a|)^{-1/2} with rational parameters.
class KSKernel {
 public:
  KSKernel(Rational c, Rational r, Rational a);

  const Rational& c() const noexcept { return c_; }
  const Rational& r() const noexcept { return r_; }
  const Rational& a() const noexcept { return a_; }
  double cd() const noexcept { return cd_; }
  double rd() const noexcept { return rd_; }
  double ad() const noexcept { return ad_; }

  /// Value at signed offset u = x - a.
  double at_offset(double u) const;
  double operator()(double x) const { return at_offset(x - ad_); }
  /// Integral from the center to a + u (odd in u).
  double primitive_offset(double u) const;
  /// Integral over [a + u0, a + u1], computed without cancellation when both
  /// offsets lie on the same side of the center.
  double integral_offsets(double u0, double u1) const;
  double integral(double lo, double hi) const { return integral_offsets(lo - ad_, hi - ad_); }
  /// As integral_offsets, with the width du = u1 - u0 supplied separately so
  /// that short spans far from the center keep full relative precision.
  double integral_span(double u0, double u1, double du) const;

  friend bool operator==(const KSKernel& l, const KSKernel& r) {
    return l.c_ == r.c_ && l.r_ == r.r_ && l.a_ == r.a_;
  }

 private:
  Rational c_, r_, a_;
  double cd_, rd_, ad_;
};

using KernelSum = std::vector<KSKernel>;

double eval(const KernelSum& s, double x);
double integral(const KernelSum& s, double lo, double hi);
/// Peak value bound: sum of amplitudes.
double amplitude_sum(const KernelSum& s);

/// x -> alpha psi(beta x + gamma), again a kernel sum. alpha = 0 gives the
/// empty sum. Throws NegativeAmplitude for alpha < 0, InvalidInput for beta = 0.
KernelSum affine(const KernelSum& s, const Rational& alpha, const Rational& beta, const Rational& gamma);

/// AV_0^b psi / psi(b) for psi = (1 + |x|)^{-1/2}, as a function of t = r b:
/// (2/t)(t + 1 - sqrt(1 + t)) = 2 sqrt(1+t) / (1 + sqrt(1+t)).
double ks_one_sided_ratio(double t);

}  // namespace edif
