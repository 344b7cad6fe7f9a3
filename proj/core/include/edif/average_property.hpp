#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "edif/kernel.hpp"

namespace edif {

/// A real function with an optional closed-form integral. When the integral
/// is absent, averages fall back to adaptive quadrature.
struct RealFunction {
  std::function<double(double)> value;
  std::function<double(double, double)> integral;
  std::string name;
  std::vector<double> kinks;  // hints for quadrature

  double operator()(double x) const { return value(x); }
};

RealFunction make_function(const KernelSum& s, std::string name = "kernel-sum");
RealFunction constant_function(double c);

struct Average {
  double value;
  double error;
  bool exact;  // closed form used
};

/// AV_a^b psi = (1/(b-a)) int_a^b psi. Throws DegenerateInterval when a = b.
Average average(const RealFunction& psi, double a, double b);

struct APViolation {
  double a, b, average, bound;
};

struct APReport {
  std::size_t checked{0};
  double worst_ratio{0.0};  // AV / (C min(psi(a), psi(b)))
  double worst_raw{0.0};    // AV / min(psi(a), psi(b)), independent of C
  double worst_a{0.0}, worst_b{0.0};
  std::vector<APViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_json() const;
};

/// Pair generator: log-uniform magnitudes over [10^lo_exp, 10^hi_exp] with
/// random signs, plus pairs straddling the supplied centers.
class PairSampler {
 public:
  PairSampler(std::uint64_t seed, std::size_t count, double lo_exp = -6.0, double hi_exp = 6.0,
              std::vector<double> centers = {0.0});
  std::vector<std::pair<double, double>> pairs() const;
  /// Positive magnitudes only (for the one-sided checks).
  std::vector<double> magnitudes() const;

 private:
  std::uint64_t seed_;
  std::size_t count_;
  double lo_exp_, hi_exp_;
  std::vector<double> centers_;
};

/// Falsifier for the C-average property over the sampled pairs.
APReport check_ap(const RealFunction& psi, double C, const std::vector<std::pair<double, double>>& pairs);

/// One-sided condition AV_0^b psi <= C psi(b) about `center`, for even psi
/// decreasing away from the center, plus spot checks of the two reductions
/// (a < 0 < b and 0 <= a < b) against 2C.
struct SymmetricReport {
  APReport one_sided;
  APReport case_straddle;
  APReport case_same_side;
  bool symmetry_ok{true};
  bool monotone_ok{true};
  bool ok() const {
    return one_sided.ok() && case_straddle.ok() && case_same_side.ok() && symmetry_ok && monotone_ok;
  }
};
SymmetricReport check_symmetric_sufficient(const RealFunction& psi, double C, double center,
                                           const std::vector<double>& magnitudes);

}  // namespace edif
