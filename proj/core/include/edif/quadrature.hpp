#pragma once

#include <functional>
#include <span>

namespace edif {

struct QuadResult {
  double value;
  double error;      // estimated absolute error
  long evaluations;
};

/// Adaptive Simpson with Richardson correction. `breaks` are interior
/// points where the integrand may have kinks; the interval is split there
/// first. Signed: lo > hi gives the negated integral.
QuadResult adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol,
                            std::span<const double> breaks = {}, int max_depth = 60);

/// Fixed 15-point Gauss-Kronrod on [lo, hi] with the Kronrod/Gauss gap as the
/// error estimate.
QuadResult gauss_kronrod15(const std::function<double(double)>& f, double lo, double hi);

}  // namespace edif
