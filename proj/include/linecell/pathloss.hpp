#pragma once

#include <cmath>

#include "linecell/errors.hpp"
#include "linecell/intervals.hpp"
#include "linecell/quadrature.hpp"
#include "linecell/scenario.hpp"

namespace linecell {

// Power attenuation between a mobile and a BS separated horizontally by
// `offset`: (1 + offset^2)^(-alpha/2). BS antennas sit one height unit above
// the road, hence the squared distance 1 + offset^2. Even in `offset`,
// maximal (= 1) at 0.
inline double path_gain(double offset, const scenario_params& p) {
  return std::pow(1.0 + offset * offset, -0.5 * p.alpha);
}

namespace detail {

inline constexpr double quadrature_tolerance = 1e-10;
inline constexpr int quadrature_max_depth = 48;

// Integrate f over [a, b]; converts a quadrature-budget failure into a typed
// error carrying the achieved estimate.
template <class F>
inline double checked_integral(F&& f, double a, double b,
                               double abs_tol = quadrature_tolerance,
                               int max_depth = quadrature_max_depth) {
  const quadrature_result q = integrate_adaptive(f, a, b, abs_tol, max_depth);
  if (!q.converged) {
    throw quadrature_error("path-gain quadrature did not converge",
                           q.error_estimate);
  }
  return q.value;
}

}  // namespace detail

// Antiderivative of the path gain: integral of (1+y^2)^(-alpha/2) over
// [0, x]. Odd in x. Dispatches to the closed forms atan (alpha = 2) and
// asinh (alpha = 1); every other exponent uses adaptive quadrature.
inline double path_gain_integral(double x, const scenario_params& p) {
  if (p.alpha == 2.0) return std::atan(x);
  if (p.alpha == 1.0) return std::asinh(x);
  const double ax = std::abs(x);
  if (ax == 0.0) return 0.0;
  const double value = detail::checked_integral(
      [&p](double y) { return path_gain(y, p); }, 0.0, ax);
  return std::copysign(value, x);
}

// Power received by a BS at abscissa x from unit-density mobiles occupying
// `cells`.
inline double received_power(double x, const interval_set& cells,
                             const scenario_params& p) {
  double total = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    total += path_gain_integral(cells[i].hi - x, p) -
             path_gain_integral(cells[i].lo - x, p);
  }
  return total;
}

// Power received by a BS at abscissa x from the whole segment [-L, L].
// Even in x (the two integral terms commute), strictly decreasing in |x|.
inline double total_received_power(double x, const scenario_params& p) {
  return path_gain_integral(p.half_length - x, p) +
         path_gain_integral(p.half_length + x, p);
}

}  // namespace linecell
