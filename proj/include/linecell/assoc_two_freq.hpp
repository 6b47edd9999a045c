#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "linecell/assoc_single.hpp"
#include "linecell/errors.hpp"
#include "linecell/pathloss.hpp"

namespace linecell {

// A-priori bounds on the two-frequency equilibrium ratio root b*.
//
// ratio_min/ratio_max bound b by the extreme interference splits (everything
// in one cell vs everything in the other). window_min/window_max bound where
// the cell map b -> cells can place a boundary: outside the window one cell
// is empty or the whole segment, so the ratio map is constant there. The
// window bounds multiply to 1.
struct ratio_bracket {
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double window_min = 0.0;
  double window_max = 0.0;
};

inline ratio_bracket bracket_constants(double x1, double x2,
                                       const scenario_params& p) {
  p.validate();
  const double n2 = p.noise_power();
  const double inv_alpha = 1.0 / p.alpha;
  ratio_bracket out;
  out.ratio_min =
      std::pow(n2 / (total_received_power(x2, p) + n2), inv_alpha);
  out.ratio_max =
      std::pow((total_received_power(x1, p) + n2) / n2, inv_alpha);
  const double d = 0.5 * std::abs(x1 - x2);
  const double s = std::sqrt(d * d + 1.0);
  out.window_min = s - d;
  out.window_max = s + d;
  return out;
}

// Cells induced by a trial ratio root b when each BS has its own band: same
// quadratic indifference locus as the shared-band model, with b supplied
// rather than derived from the placements. Total in b: a value that would
// make the inner cell empty just returns it empty (boundary.tau <= 1 tells
// the caller).
inline cell_partition cells_of_ratio(double b, double x1, double x2,
                                     const scenario_params& p) {
  p.validate();
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw std::invalid_argument("cells_of_ratio: ratio root must be positive");
  }
  if (x1 == x2) {
    throw std::invalid_argument("cells_of_ratio: collocated base stations");
  }
  return detail::partition_for_ratio(x1, x2, b, p);
}

// One application of the self-consistency map: partition by a trial b, then
// recompute the ratio root from the per-cell interference each BS would
// actually hear (mobiles in cell j transmit in BS j's band only). Raising b
// shrinks cell 1 and grows cell 2, which lowers BS 1's interference and
// raises BS 2's, so the map is strictly decreasing and its fixed point is
// unique.
inline double ratio_map(double b, double x1, double x2,
                        const scenario_params& p) {
  const cell_partition cells = cells_of_ratio(b, x1, x2, p);
  const double n2 = p.noise_power();
  return std::pow((received_power(x1, cells.cell1, p) + n2) /
                      (received_power(x2, cells.cell2, p) + n2),
                  1.0 / p.alpha);
}

// Everything the caller might want to know about a fixed-point solve.
struct fixed_point_result {
  double ratio = 1.0;             // b* with |ratio_map(b*) - b*| <= residual
  ratio_bracket bracket;
  double start = 1.0;             // midpoint of the refined starting bracket
  double relaxation = 1.0;        // damping factor used by the iteration
  std::size_t iterations = 0;
  std::size_t restarts = 0;       // times the damping was halved
  double residual = 0.0;          // |ratio_map(b*) - b*|
  std::vector<double> trace;      // iterates, starting point first
  cell_partition partition;       // cells_of_ratio at b*
};

namespace detail {

// Invert a strictly decreasing map on [lo, hi] by bisection:
// returns b with f(b) = target to within xtol on the argument.
template <class F>
double invert_decreasing(F&& f, double lo, double hi, double target,
                         double xtol) {
  if (target >= f(lo)) return lo;
  if (target <= f(hi)) return hi;
  while (hi - lo > xtol) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Damped fixed-point iteration for the two-frequency equilibrium ratio.
//
// The map F = ratio_map is strictly decreasing, so plain iteration can
// oscillate; a damped step b <- g*F(b) + (1-g)*b with g < 1/(1 + max|F'|)
// is a contraction near the fixed point. The starting bracket is refined by
// intersecting [ratio_min, ratio_max] with the window, inverting F where
// the window cuts the a-priori bracket:
//   - both bounds inside the window: start from the window,
//   - ratio_min above window_min only: iterate on [ratio_min, F^-1(ratio_min)]
//     (or the window if F stays above ratio_min there),
//   - ratio_max below window_max only: mirrored,
//   - both bounds inside: [F^-1(ratio_max), F^-1(ratio_min)].
// The damping is sized from a sampled bound on |F'| over the first step's
// span; if an iterate ever leaves the current bracket the damping is halved
// and the iteration restarts (counted in `restarts`).
//
// Termination: |next - b| < relaxation * tol. Because the step equals
// relaxation * (F(b) - b), this bounds the *residual* |F(b) - b| by tol
// directly rather than by tol/relaxation, which would be much looser.
inline fixed_point_result solve_fixed_point(double x1, double x2,
                                            const scenario_params& p,
                                            double tol = 1e-9) {
  p.validate();
  if (x1 == x2) {
    throw std::invalid_argument("solve_fixed_point: collocated base stations");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("solve_fixed_point: tol must be positive");
  }

  fixed_point_result out;
  out.bracket = bracket_constants(x1, x2, p);
  const auto f = [&](double b) { return ratio_map(b, x1, x2, p); };

  // Refine the starting bracket (see the four cases above).
  const double inv_xtol = 1e-10;
  double lo, hi;
  const bool min_inside = out.bracket.ratio_min > out.bracket.window_min;
  const bool max_inside = out.bracket.ratio_max < out.bracket.window_max;
  if (!min_inside && !max_inside) {
    lo = out.bracket.window_min;
    hi = out.bracket.window_max;
  } else if (min_inside && !max_inside) {
    lo = out.bracket.ratio_min;
    hi = f(out.bracket.window_max) > out.bracket.ratio_min
             ? out.bracket.window_max
             : detail::invert_decreasing(f, out.bracket.window_min,
                                         out.bracket.window_max,
                                         out.bracket.ratio_min, inv_xtol);
  } else if (!min_inside && max_inside) {
    hi = out.bracket.ratio_max;
    lo = f(out.bracket.window_min) < out.bracket.ratio_max
             ? out.bracket.window_min
             : detail::invert_decreasing(f, out.bracket.window_min,
                                         out.bracket.window_max,
                                         out.bracket.ratio_max, inv_xtol);
  } else {
    lo = detail::invert_decreasing(f, out.bracket.window_min,
                                   out.bracket.window_max,
                                   out.bracket.ratio_max, inv_xtol);
    hi = detail::invert_decreasing(f, out.bracket.window_min,
                                   out.bracket.window_max,
                                   out.bracket.ratio_min, inv_xtol);
  }
  if (lo > hi) std::swap(lo, hi);

  const double b0 = 0.5 * (lo + hi);
  out.start = b0;

  // Bound |F'| over the span the first step could cover.
  const double f0 = f(b0);
  double span_lo = std::min(b0, f0);
  double span_hi = std::max(b0, f0);
  if (span_hi - span_lo < 1e-8) {
    span_lo -= 1e-8;
    span_hi += 1e-8;
    span_lo = std::max(span_lo, out.bracket.window_min * 0.5);
  }
  const std::size_t grid = 512;
  const double h = (span_hi - span_lo) / (4.0 * static_cast<double>(grid));
  double slope_max = 0.0;
  for (std::size_t i = 0; i <= grid; ++i) {
    const double b = span_lo + (span_hi - span_lo) * static_cast<double>(i) /
                                   static_cast<double>(grid);
    const double d = std::abs(f(b + h) - f(b - h)) / (2.0 * h);
    slope_max = std::max(slope_max, d);
  }
  double gamma = 1.0 / (1.0 + 1.1 * slope_max);
  out.relaxation = gamma;

  const std::size_t max_iters = 1000000;
  for (;;) {
    out.trace.clear();
    double b = b0;
    out.trace.push_back(b);
    bool restarted = false;
    for (std::size_t it = 0; it < max_iters; ++it) {
      const double fb = f(b);
      const double next = gamma * fb + (1.0 - gamma) * b;
      ++out.iterations;
      if (next < lo || next > hi) {
        // Overshot the bracket: the damping was too optimistic.
        gamma *= 0.5;
        out.relaxation = gamma;
        ++out.restarts;
        restarted = true;
        break;
      }
      out.trace.push_back(next);
      if (std::abs(next - b) < gamma * tol) {
        b = next;
        out.ratio = b;
        out.residual = std::abs(f(b) - b);
        if (out.residual > 10.0 * tol) {
          throw convergence_error(
              "solve_fixed_point: converged step but residual exceeds bound",
              out.trace);
        }
        out.partition = cells_of_ratio(b, x1, x2, p);
        return out;
      }
      b = next;
    }
    if (!restarted) {
      throw convergence_error("solve_fixed_point: iteration cap exceeded",
                              out.trace);
    }
    out.iterations = 0;
  }
}

}  // namespace linecell
