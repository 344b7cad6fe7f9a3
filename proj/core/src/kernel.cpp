#include "edif/kernel.hpp"

#include <cmath>

#include "edif/error.hpp"

namespace edif {

KSKernel::KSKernel(Rational c, Rational r, Rational a)
    : c_(std::move(c)), r_(std::move(r)), a_(std::move(a)) {
  if (sgn(c_) < 0) throw Error(ErrorKind::NegativeAmplitude, "kernel amplitude must be >= 0");
  if (sgn(r_) <= 0) throw Error(ErrorKind::InvalidInput, "kernel rate must be > 0");
  cd_ = to_double(c_);
  rd_ = to_double(r_);
  ad_ = to_double(a_);
}

double KSKernel::at_offset(double u) const { return cd_ / std::sqrt(1.0 + rd_ * std::fabs(u)); }

double KSKernel::primitive_offset(double u) const {
  // (2c/r)(sqrt(1 + r|u|) - 1) = 2c|u| / (sqrt(1 + r|u|) + 1)
  double au = std::fabs(u);
  double v = 2.0 * cd_ * au / (std::sqrt(1.0 + rd_ * au) + 1.0);
  return u < 0 ? -v : v;
}

double KSKernel::integral_offsets(double u0, double u1) const {
  if ((u0 >= 0 && u1 >= 0) || (u0 <= 0 && u1 <= 0)) {
    double s0 = std::sqrt(1.0 + rd_ * std::fabs(u0));
    double s1 = std::sqrt(1.0 + rd_ * std::fabs(u1));
    // (2c/r)(s1 - s0) = 2c(|u1| - |u0|)/(s1 + s0), signed by side.
    double v = 2.0 * cd_ * (std::fabs(u1) - std::fabs(u0)) / (s1 + s0);
    return u0 >= 0 && u1 >= 0 ? v : -v;
  }
  return primitive_offset(u1) - primitive_offset(u0);
}

double KSKernel::integral_span(double u0, double u1, double du) const {
  if ((u0 >= 0 && u1 >= 0) || (u0 <= 0 && u1 <= 0)) {
    double s0 = std::sqrt(1.0 + rd_ * std::fabs(u0));
    double s1 = std::sqrt(1.0 + rd_ * std::fabs(u1));
    return 2.0 * cd_ * du / (s0 + s1);
  }
  return primitive_offset(u1) - primitive_offset(u0);
}

double eval(const KernelSum& s, double x) {
  double v = 0.0;
  for (const auto& k : s) v += k(x);
  return v;
}

double integral(const KernelSum& s, double lo, double hi) {
  double v = 0.0;
  for (const auto& k : s) v += k.integral(lo, hi);
  return v;
}

double amplitude_sum(const KernelSum& s) {
  double v = 0.0;
  for (const auto& k : s) v += k.cd();
  return v;
}

KernelSum affine(const KernelSum& s, const Rational& alpha, const Rational& beta, const Rational& gamma) {
  if (sgn(alpha) < 0) throw Error(ErrorKind::NegativeAmplitude, "alpha must be >= 0");
  if (sgn(alpha) == 0) return {};
  if (sgn(beta) == 0) throw Error(ErrorKind::InvalidInput, "beta = 0 leaves the kernel family");
  KernelSum out;
  for (const auto& k : s) {
    Rational c = alpha * k.c();
    Rational r = k.r() * abs(beta);
    Rational a = (k.a() - gamma) / beta;
    c.canonicalize();
    r.canonicalize();
    a.canonicalize();
    out.emplace_back(c, r, a);
  }
  return out;
}

double ks_one_sided_ratio(double t) {
  double s = std::sqrt(1.0 + t);
  return 2.0 * s / (1.0 + s);
}

}  // namespace edif
