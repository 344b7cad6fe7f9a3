#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "edif/average_property.hpp"
#include "edif/func_rep.hpp"

namespace edif {

struct DerivativeReport {
  double g_x{0};
  std::vector<double> hs, quotients, gaps, errs;
  bool monotone{true};  // gaps non-increasing along the given hs
  double final_gap() const { return gaps.empty() ? 0.0 : gaps.back(); }
  bool pass(double tol) const { return !gaps.empty() && final_gap() < tol; }
  std::string to_json() const;
};

/// Difference quotients (f(x+h) - f(x))/h of the given stage against g(x).
DerivativeReport derivative_check(const FuncRep& rep, const Rational& x, const std::vector<double>& hs,
                                  std::size_t stage);
inline DerivativeReport derivative_check(const FuncRep& rep, const Rational& x, const std::vector<double>& hs) {
  return derivative_check(rep, x, hs, rep.stages());
}

/// One summand psi_j seen from a fixed point x: its value at x + h and its
/// integral over [x, x + h].
struct SummandView {
  std::function<double(double)> value;
  std::function<double(double)> integral;
};

struct DCheckReport {
  double g_x{0};         // sum of all summands at x
  std::size_t m{0};      // stage with partial sum >= g(x) - eps
  double delta{0};       // continuity radius of the partial sum
  double eps{0}, C{4};
  std::size_t samples{0};
  double min_av{0}, max_av{0};
  std::vector<double> violating_h;
  bool ok() const { return violating_h.empty() && delta > 0; }
  std::string to_json() const;
};

/// Finite-stage replay of the summation argument: pick m, find delta by
/// probing, then check g(x) - 2 eps <= AV_x^{x+h} g <= g(x) + (C+1) eps on
/// sampled h in (-delta, delta).
DCheckReport finite_stage_D_check(const std::vector<SummandView>& psis, double eps, double C = 4.0,
                                  std::size_t samples = 256, std::uint64_t seed = 1);

/// Same, for the subtracted kernel layers of a representation at x.
DCheckReport finite_stage_D_check(const FuncRep& rep, const Rational& x, double eps, double C = 4.0,
                                  std::size_t samples = 256, std::uint64_t seed = 1);

/// Summand views of plain functions at x.
std::vector<SummandView> views_at(const std::vector<RealFunction>& psis, double x);

}  // namespace edif
