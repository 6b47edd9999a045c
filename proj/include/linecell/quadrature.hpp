#pragma once

#include <cmath>
#include <utility>

namespace linecell {

struct quadrature_result {
  double value = 0.0;
  double error_estimate = 0.0;  // accumulated Richardson estimates
  bool converged = true;
};

namespace detail {

template <class F>
class adaptive_simpson {
 public:
  adaptive_simpson(F& f, int max_depth) : f_(f), max_depth_(max_depth) {}

  quadrature_result run(double a, double b, double abs_tol) {
    const double fa = f_(a);
    const double fb = f_(b);
    const double m = 0.5 * (a + b);
    const double fm = f_(m);
    quadrature_result out;
    out.value = recurse(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), abs_tol,
                        max_depth_, out);
    return out;
  }

 private:
  static double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  }

  double recurse(double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth,
                 quadrature_result& out) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f_(lm);
    const double frm = f_(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
      if (depth <= 0 && std::abs(delta) > 15.0 * tol) out.converged = false;
      out.error_estimate += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;  // Richardson extrapolation
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
  }

  F& f_;
  int max_depth_;
};

}  // namespace detail

// Adaptive Simpson integration of f over [a, b] with Richardson
// extrapolation. Panels split until the local error estimate meets its share
// of abs_tol or max_depth is reached; in the latter case `converged` is false
// and `error_estimate` reports what was achieved.
template <class F>
quadrature_result integrate_adaptive(F&& f, double a, double b,
                                     double abs_tol = 1e-10,
                                     int max_depth = 48) {
  if (a == b) return {0.0, 0.0, true};
  detail::adaptive_simpson<std::remove_reference_t<F>> engine(f, max_depth);
  return engine.run(a, b, abs_tol);
}

}  // namespace linecell
