#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "linecell/pathloss.hpp"

namespace linecell {

// Geometry of the indifference boundary separating two cells.
struct boundary_params {
  double ratio = 1.0;   // alpha-th root of the interference(+noise) ratio,
                        // BS 1 total over BS 2 total
  double tau = 0.0;     // discriminant: the inner cell is nonempty iff tau >= 1
  double center = 0.0;  // abscissa of the inner cell's midpoint
  double radius = 0.0;  // half-width of the inner cell (0 when tau <= 1)
};

// A two-cell association outcome. cell1/cell2 cover [-L, L] and overlap at
// most at measure-zero indifference points. `degenerate` marks collocated-BS
// conventions whose cells are a representative choice rather than forced by
// the SINR comparison.
struct cell_partition {
  interval_set cell1;
  interval_set cell2;
  std::optional<boundary_params> boundary;
  bool degenerate = false;
};

namespace detail {

// Solution of (y - x2)^2 + 1 = b^2 * ((y - x1)^2 + 1), the locus where the
// two SINR densities coincide when the interference ratio root is b. For
// b != 1 this is a quadratic whose root interval (when real) is the cell of
// the BS with the *smaller* denominator... concretely: for b < 1 the set
// {y : density2 >= density1} is [lo, hi]; for b > 1 the same [lo, hi] is
// {y : density1 >= density2}. Evaluated in the sign-safe quadratic form to
// stay accurate as b -> 1 (where one root diverges and the other tends to
// the midpoint of the placements).
struct indifference_roots {
  double tau = 0.0;
  double center = 0.0;
  bool real = false;  // tau > 1: [lo, hi] is a genuine interval
  double lo = 0.0;
  double hi = 0.0;
};

inline indifference_roots solve_indifference(double x1, double x2, double b) {
  const double b2 = b * b;
  const double lead = 1.0 - b2;  // quadratic leading coefficient
  if (lead == 0.0) {
    throw std::logic_error("solve_indifference: b == 1 has no quadratic form");
  }
  indifference_roots out;
  out.tau = std::abs((x1 - x2) * b / lead);
  out.center = (x2 - x1 * b2) / lead;
  if (!(out.tau > 1.0)) return out;

  const double half_lin = -(x2 - x1 * b2);  // half the linear coefficient
  const double constant = x2 * x2 + 1.0 - (x1 * x1 + 1.0) * b2;
  const double bd = b * (x1 - x2);
  const double half_disc = std::sqrt(bd * bd - lead * lead);
  const double q = -(half_lin + std::copysign(half_disc, half_lin));
  const double r1 = q / lead;
  const double r2 = constant / q;
  out.real = true;
  out.lo = std::min(r1, r2);
  out.hi = std::max(r1, r2);
  return out;
}

// Shared cell-construction core: the partition induced by comparing
// path_gain(y - x1)/den1 with path_gain(y - x2)/den2 where
// b = (den1/den2)^(1/alpha). Used with the equilibrium value of b by the
// single-frequency model and with trial values of b by the two-frequency
// fixed-point solver.
inline cell_partition partition_for_ratio(double x1, double x2, double b,
                                          const scenario_params& p) {
  const double L = p.half_length;
  cell_partition out;
  if (b == 1.0) {
    // Equal denominators: nearest-BS split at the midpoint; ties go to BS 1.
    const double m = std::clamp(0.5 * (x1 + x2), -L, L);
    if (x1 <= x2) {
      out.cell1 = interval_set(-L, m);
      out.cell2 = interval_set(m, L);
    } else {
      out.cell1 = interval_set(m, L);
      out.cell2 = interval_set(-L, m);
    }
    out.boundary = boundary_params{1.0, std::numeric_limits<double>::infinity(),
                                   0.5 * (x1 + x2), 0.0};
    return out;
  }

  const indifference_roots roots = solve_indifference(x1, x2, b);
  interval_set inner;
  if (roots.real) {
    const double lo = std::max(roots.lo, -L);
    const double hi = std::min(roots.hi, L);
    if (lo < hi) inner = interval_set(lo, hi);
  }
  const interval_set outer = inner.complement_within(-L, L);
  if (b < 1.0) {
    out.cell1 = outer;
    out.cell2 = inner;
  } else {
    out.cell1 = inner;
    out.cell2 = outer;
  }
  out.boundary = boundary_params{
      b, roots.tau, roots.center,
      roots.real ? std::sqrt(roots.tau * roots.tau - 1.0) : 0.0};
  return out;
}

}  // namespace detail

// The alpha-th root of the ratio of total interference-plus-noise at the two
// BSs. With a shared band every mobile interferes at both BSs, so the totals
// (and hence b) depend only on the placements. b < 1 means BS 1 hears *less*
// interference.
inline double interference_ratio_root(double x1, double x2,
                                      const scenario_params& p) {
  p.validate();
  const double n2 = p.noise_power();
  return std::pow((total_received_power(x1, p) + n2) /
                      (total_received_power(x2, p) + n2),
                  1.0 / p.alpha);
}

// SINR-equilibrium mobile association for two BSs sharing one band: no mobile
// can raise its SINR density by switching BS. The quieter BS keeps the far
// tails; the louder BS gets an interval (possibly empty, possibly clipped by
// the segment). Collocated BSs are degenerate: every mobile is indifferent,
// and the whole segment goes to BS 1 by convention.
inline cell_partition equilibrium_partition_single(double x1, double x2,
                                                   const scenario_params& p) {
  p.validate();
  if (x1 == x2) {
    cell_partition out;
    out.cell1 = interval_set(-p.half_length, p.half_length);
    out.degenerate = true;
    return out;
  }
  return detail::partition_for_ratio(x1, x2, interference_ratio_root(x1, x2, p),
                                     p);
}

}  // namespace linecell
