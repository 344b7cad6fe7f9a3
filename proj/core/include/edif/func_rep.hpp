#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "edif/kernel.hpp"
#include "edif/rational.hpp"

namespace edif {

/// A value with an absolute error bound.
struct Estimate {
  double value{0.0};
  double err{0.0};
};

/// b(x) = x^2/(x^2+1) and its primitive x - atan(x), the latter evaluated by
/// series near the origin to avoid cancellation.
double base_shape(double x);
double base_primitive(double x);

/// One polynomial piece p(x) = sum_k coeffs[k] (x - x0)^k on [x0, x1].
struct BumpPiece {
  Rational x0, x1;
  std::vector<Rational> coeffs;
};

/// Compactly supported, nonnegative C^1 piecewise polynomial with exact
/// rational coefficients.
class PiecewiseBump {
 public:
  PiecewiseBump() = default;
  PiecewiseBump(std::vector<BumpPiece> pieces, std::vector<Rational> pins, Rational height);

  bool empty() const noexcept { return pieces_.empty(); }
  double operator()(double x) const;
  /// Signed integral over [lo, hi].
  double integral(double lo, double hi) const;
  /// Exact integral of one piece.
  static Rational piece_integral(const BumpPiece& p);
  /// Exact integral of all pieces contained in [lo, hi].
  Rational exact_integral(const Rational& lo, const Rational& hi) const;
  /// Certified maximum.
  const Rational& height() const noexcept { return height_; }
  const std::vector<BumpPiece>& pieces() const noexcept { return pieces_; }
  const std::vector<Rational>& pins() const noexcept { return pins_; }

 private:
  struct Cache {
    double x0, x1;
    std::vector<double> c;   // value coefficients
    std::vector<double> ic;  // primitive coefficients (index k holds t^k)
  };
  double primitive_to(std::size_t i, double x) const;

  std::vector<BumpPiece> pieces_;
  std::vector<Rational> pins_;
  Rational height_{0};
  std::vector<Cache> cache_;
};

/// Stage n of a layered representation:
///   clipped:  g_{n+1} = max(g_n - psi_n, 0) + eps b + bump
///   plain:    g_{n+1} = g_n - psi_n + bump
/// The clipped form is g_n - psi_n + theta with theta = max(0, psi_n - g_n) + eps b + bump.
struct Layer {
  KernelSum psi;
  bool clipped{false};
  Rational eps{0};
  PiecewiseBump bump;
};

/// A maximal piece of {psi_n > g_n} inside one half-segment next to an
/// anchor. Offsets are relative to that anchor.
struct RegionPiece {
  std::size_t anchor;
  double lo, hi;
  int side;     // sign of the points in the piece
  double mass;  // integral of psi_n - g_n over the piece
  double peak;  // largest sampled psi_n - g_n
};

/// Evaluation origin: an exact rational plus cached double distances to every
/// anchor of the representation it was made for.
struct Frame {
  Rational origin;
  double origin_d{0.0};
  std::vector<double> dist;  // to_double(origin - anchor_j)
};

/// g = g_0 - sum psi_n + sum theta_n with g_0 = kappa b + constant and
/// f(x) = int_0^x g.
class FuncRep {
 public:
  explicit FuncRep(Rational kappa = Rational(1), Rational constant = Rational(0));

  /// Returns a new representation with one more stage. Clipped layers get
  /// their positivity regions located here; throws CrossingIsolationFailure.
  FuncRep with_layer(Layer layer) const;
  /// Replaces the bump of the last layer. Regions do not depend on it.
  FuncRep with_last_bump(PiecewiseBump bump) const;
  /// Keeps the first n stages.
  FuncRep truncated(std::size_t n) const;

  std::size_t stages() const noexcept { return layers_.size(); }
  const Rational& kappa() const noexcept { return kappa_; }
  const Rational& constant() const noexcept { return constant_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  const std::vector<std::vector<RegionPiece>>& regions() const noexcept { return regions_; }
  const std::vector<Rational>& anchors() const noexcept { return anchors_; }

  Frame frame(const Rational& x) const;

  /// g_stage at origin + off.
  Estimate g(const Frame& fr, double off, std::size_t stage) const;
  Estimate g(const Rational& x, std::size_t stage) const;
  Estimate g(const Rational& x) const { return g(x, stages()); }
  /// Convenience for plain double abscissae (frame at 0).
  double g_at(double x, std::size_t stage) const;
  double g_at(double x) const { return g_at(x, stages()); }

  /// f_stage at origin + off.
  Estimate f(const Frame& fr, double off, std::size_t stage) const;
  Estimate f(const Rational& x, std::size_t stage) const;
  Estimate f(const Rational& x) const { return f(x, stages()); }
  Estimate f_at(double x, std::size_t stage) const;
  Estimate f_at(double x) const { return f_at(x, stages()); }

  /// int over [origin + o0, origin + o1] of g_stage, without cancellation.
  Estimate local_increment(const Frame& fr, double o0, double o1, std::size_t stage) const;
  /// f_stage(x1) - f_stage(x0), local when the points are close.
  Estimate increment(const Rational& x0, const Rational& x1, std::size_t stage) const;

  /// Contributions to f_stage(x): base, then per stage -int psi_n and
  /// +int theta_n (both from 0 to x).
  struct Telescoped {
    double base;
    std::vector<double> psi;
    std::vector<double> theta;
  };
  Telescoped telescoped(const Rational& x, std::size_t stage) const;

  /// Certified bound on sup g_stage from ||g_{n+1}|| <= ||g_n|| + eps_n + ||bump_n||.
  Rational sup_norm_bound(std::size_t stage) const;
  Rational sup_norm_bound() const { return sup_norm_bound(stages()); }
  /// Largest sampled value of theta_n restricted to psi_n > g_n, plus eps_n and
  /// the bump height. Upper estimate of ||theta_n||.
  double theta_norm_estimate(std::size_t n) const;
  /// lim g at +-infinity (kappa + constant + sum eps).
  Rational limit_at_infinity(std::size_t stage) const;

  /// psi_n at origin + off, and its integral over [origin + o0, origin + o1].
  double psi_at(std::size_t n, const Frame& fr, double off) const;
  double psi_span(std::size_t n, const Frame& fr, double o0, double o1) const;

 private:
  std::size_t anchor_index(const Rational& a) const;
  void add_anchor(const Rational& a);
  void locate_regions(std::size_t n);

  double b_span(const Frame& fr, double o0, double o1) const;
  double bump_span(const PiecewiseBump& b, const Frame& fr, double o0, double o1) const;
  double region_span(std::size_t n, const Frame& fr, double o0, double o1, double& mag) const;
  double local(const Frame& fr, double o0, double o1, std::size_t stage, double& mag) const;
  double global_f(const Frame& fr, double off, std::size_t stage, double& mag, Telescoped* parts) const;

  Rational kappa_, constant_;
  double kappa_d_, constant_d_;
  std::vector<double> eps_d_;
  std::vector<Layer> layers_;
  std::vector<std::vector<RegionPiece>> regions_;
  std::vector<Rational> anchors_;
  std::vector<Frame> anchor_frames_;
  // kernel_anchor_[n][k]: anchor index of kernel k in layer n.
  std::vector<std::vector<std::size_t>> kernel_anchor_;
};

}  // namespace edif
