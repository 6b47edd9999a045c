#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "linecell/assoc_single.hpp"
#include "linecell/assoc_two_freq.hpp"
#include "linecell/modes.hpp"
#include "linecell/search.hpp"

namespace linecell {

// All association equilibria found under SIC decoding on a shared band.
// `partitions` lists interior (two-nonempty-cell) equilibria; the capture
// flags say whether the all-mobiles-to-one-BS profiles are also stable.
// Under the pessimistic belief the answer is unique and the flags stay false.
struct sic_equilibria {
  std::vector<cell_partition> partitions;
  bool capture_by_bs1 = false;
  bool capture_by_bs2 = false;
};

// Aggregate uplink throughput of a SIC receiver at x decoding `own` while the
// other cell's mobiles transmit in the same band. Decoding order drops out:
// the per-mobile rates telescope to a single log of the power ratio.
inline double sic_utility_single_freq(double x, const interval_set& own,
                                      const interval_set& other,
                                      const scenario_params& p) {
  p.validate();
  return 0.5 * std::log1p(received_power(x, own, p) /
                          (received_power(x, other, p) + p.noise_power()));
}

// Same with per-BS bands: the other cell transmits out of band, so only
// thermal noise remains under the cancelled signals.
inline double sic_utility_two_freq(double x, const interval_set& own,
                                   const scenario_params& p) {
  p.validate();
  return 0.5 * std::log1p(received_power(x, own, p) / p.noise_power());
}

// Nearest-BS association. With per-BS bands and SIC, a cell's aggregate
// throughput depends only on its total received power, so each mobile is
// claimed by the closer BS; the split sits at the placement midpoint
// (clamped to the segment when a BS is far outside it).
inline cell_partition sic_association_two_freq(double x1, double x2,
                                               const scenario_params& p) {
  p.validate();
  const double L = p.half_length;
  cell_partition out;
  if (x1 == x2) {
    const double s = std::clamp(x1, -L, L);
    out.cell1 = interval_set(-L, s);
    out.cell2 = interval_set(s, L);
    out.degenerate = true;
    return out;
  }
  const double v = std::clamp(0.5 * (x1 + x2), -L, L);
  if (x1 < x2) {
    out.cell1 = interval_set(-L, v);
    out.cell2 = interval_set(v, L);
  } else {
    out.cell1 = interval_set(v, L);
    out.cell2 = interval_set(-L, v);
  }
  return out;
}

namespace detail {

// Split point s of [-L, L] such that a BS at x receives equal power from
// [-L, s] and [s, L]. The difference is strictly increasing in s with
// values -E^o(x) and +E^o(x) at the ends, so bisection always succeeds.
inline double balanced_split(double x, const scenario_params& p) {
  const auto diff = [&](double s) {
    return 2.0 * path_gain_integral(s - x, p) +
           path_gain_integral(p.half_length + x, p) -
           path_gain_integral(p.half_length - x, p);
  };
  return bisect_root(diff, -p.half_length, p.half_length, 1e-12);
}

// Maximum over the segment of g(y - a)/g(y - b): evaluated at the segment
// ends, at the interior stationary points (where (y-a)(y-b) = 1), and on a
// dense guard grid.
inline double max_gain_ratio(double a, double b, const scenario_params& p) {
  const double L = p.half_length;
  const auto ratio = [&](double y) {
    return path_gain(y - a, p) / path_gain(y - b, p);
  };
  double best = std::max(ratio(-L), ratio(L));
  const double disc = std::sqrt((a - b) * (a - b) + 4.0);
  for (double y : {0.5 * ((a + b) - disc), 0.5 * ((a + b) + disc)}) {
    if (y > -L && y < L) best = std::max(best, ratio(y));
  }
  const std::size_t n = 10000;
  for (std::size_t i = 0; i <= n; ++i) {
    const double y = -L + 2.0 * L * static_cast<double>(i) / n;
    best = std::max(best, ratio(y));
  }
  return best;
}

}  // namespace detail

// Association equilibria on a shared band with SIC receivers.
//
// Pessimistic mobiles (assume they are decoded first, bearing the other
// cell's full power) rank BSs exactly as matched-filter mobiles do, so the
// unique equilibrium is the single-frequency partition.
//
// Optimistic mobiles (assume they are decoded last at either BS, so only the
// *other* cell's uncancelled power interferes) compare crosswise
// denominators, which makes the self-consistency map increasing in the ratio
// root and permits several equilibria:
//   - interior equilibria: fixed points of the crosswise ratio map, found by
//     a sign scan over a 10^4-point grid plus bisection (enumeration, not a
//     uniqueness claim);
//   - symmetric placements (x1 = -x2 != 0): the midpoint split is always an
//     equilibrium (ratio root exactly 1) and is included even when the scan
//     cannot see the sign change;
//   - capture equilibria: all mobiles at one BS, stable iff no location
//     would gain by facing that BS's whole power as interference, checked
//     through the gain-ratio condition at the segment ends, the stationary
//     points, and a guard grid;
//   - collocated BSs: every mobile is indifferent once the cross powers are
//     equal, so the equal-received-power split is returned (degenerate) and
//     both captures are stable.
inline sic_equilibria sic_association_single_freq(double x1, double x2,
                                                  const scenario_params& p,
                                                  decoding_belief belief) {
  p.validate();
  sic_equilibria out;
  if (belief == decoding_belief::pessimistic) {
    out.partitions.push_back(equilibrium_partition_single(x1, x2, p));
    return out;
  }

  const double L = p.half_length;
  const double n2 = p.noise_power();
  if (x1 == x2) {
    const double s = detail::balanced_split(x1, p);
    cell_partition cp;
    cp.cell1 = interval_set(-L, s);
    cp.cell2 = interval_set(s, L);
    cp.degenerate = true;
    out.partitions.push_back(cp);
    out.capture_by_bs1 = true;
    out.capture_by_bs2 = true;
    return out;
  }

  out.capture_by_bs1 = detail::max_gain_ratio(x2, x1, p) <=
                       1.0 + total_received_power(x2, p) / n2;
  out.capture_by_bs2 = detail::max_gain_ratio(x1, x2, p) <=
                       1.0 + total_received_power(x1, p) / n2;

  // Crosswise self-consistency map: with cells taken from a trial ratio
  // root r, the implied root is the alpha-th root of
  // (E(x1, cell2) + noise)/(E(x2, cell1) + noise).
  const auto crosswise = [&](double r) {
    const cell_partition cells = detail::partition_for_ratio(x1, x2, r, p);
    return std::pow((received_power(x1, cells.cell2, p) + n2) /
                        (received_power(x2, cells.cell1, p) + n2),
                    1.0 / p.alpha);
  };
  const auto residual = [&](double r) { return crosswise(r) - r; };

  std::vector<double> roots;
  if (x1 == -x2) roots.push_back(1.0);  // exact fixed point by symmetry

  const ratio_bracket rb = bracket_constants(x1, x2, p);
  const double lo = std::max(rb.window_min, rb.ratio_min);
  const double hi = std::min(rb.window_max, rb.ratio_max);
  if (lo < hi) {
    const std::size_t n = 10000;
    double prev_r = lo;
    double prev_res = residual(lo);
    for (std::size_t i = 1; i <= n; ++i) {
      const double r = lo + (hi - lo) * static_cast<double>(i) / n;
      const double res = residual(r);
      if (prev_res == 0.0) {
        roots.push_back(prev_r);
      } else if ((prev_res > 0.0) != (res > 0.0)) {
        roots.push_back(detail::bisect_root(residual, prev_r, r, 1e-10));
      }
      prev_r = r;
      prev_res = res;
    }
    if (prev_res == 0.0) roots.push_back(prev_r);
  }

  std::sort(roots.begin(), roots.end());
  double last = -1.0;
  for (double r : roots) {
    if (r - last < 1e-6) continue;
    last = r;
    out.partitions.push_back(detail::partition_for_ratio(x1, x2, r, p));
  }
  return out;
}

}  // namespace linecell
