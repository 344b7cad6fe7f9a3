#include "edif/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace edif {

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  long evals = 0;
  double err = 0.0;

  double call(double x) {
    ++evals;
    return f(x);
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = call(lm), frm = call(rm);
    double h = b - a;
    double left = h / 12.0 * (fa + 4.0 * flm + fm);
    double right = h / 12.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol || m <= a || m >= b) {
      err += std::fabs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }

  double run(double a, double b, double tol, int depth) {
    double fa = call(a), fb = call(b), fm = call(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return recurse(a, b, fa, fm, fb, whole, tol, depth);
  }
};

}  // namespace

QuadResult adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol,
                            std::span<const double> breaks, int max_depth) {
  if (lo == hi) return {0.0, 0.0, 0};
  double sgn = 1.0;
  if (lo > hi) {
    std::swap(lo, hi);
    sgn = -1.0;
  }
  std::vector<double> pts{lo};
  std::vector<double> inner;
  for (double b : breaks)
    if (b > lo && b < hi) inner.push_back(b);
  std::sort(inner.begin(), inner.end());
  pts.insert(pts.end(), inner.begin(), inner.end());
  pts.push_back(hi);

  Simpson s{f};
  double total = 0.0;
  double width = hi - lo;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double piece_tol = tol * (pts[i + 1] - pts[i]) / width;
    total += s.run(pts[i], pts[i + 1], piece_tol, max_depth);
  }
  return {sgn * total, s.err, s.evals};
}

QuadResult gauss_kronrod15(const std::function<double(double)>& f, double lo, double hi) {
  static constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                   0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  double fc = f(c);
  double k = fc * wgk[7], g = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    double v = f(c - h * xgk[j]) + f(c + h * xgk[j]);
    k += wgk[j] * v;
    if (j % 2 == 1) g += wg[j / 2] * v;
  }
  return {k * h, std::fabs((k - g) * h), 15};
}

}  // namespace edif
