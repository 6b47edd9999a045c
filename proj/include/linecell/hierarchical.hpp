#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "linecell/assoc_single.hpp"
#include "linecell/assoc_two_freq.hpp"
#include "linecell/errors.hpp"
#include "linecell/modes.hpp"
#include "linecell/search.hpp"
#include "linecell/sic.hpp"

namespace linecell {

struct placement_pair {
  double x1 = 0.0;
  double x2 = 0.0;
};

enum class solve_method { closed_form, grid_search, golden_section, br_dynamics };

// Outcome of a placement-level computation: where the BSs ended up, the
// association the mobiles then settle into, the per-BS utilities at that
// point, and how the answer was obtained. `trace` carries the placement
// iterates when the method is iterative; `converged` is false only when an
// iterative method ran out of its iteration budget.
struct equilibrium_report {
  placement_pair placements;
  cell_partition partition;
  double utility1 = 0.0;
  double utility2 = 0.0;
  solve_method method = solve_method::closed_form;
  bool converged = true;
  std::vector<placement_pair> trace;
};

// The association the mobile continuum settles into for fixed placements.
// Shared-band SIC uses the pessimistic (unique) equilibrium: the optimistic
// variant admits several equilibria, so it does not induce a well-defined
// placement game.
inline cell_partition associate(double x1, double x2,
                                const scenario_params& p, utility_mode mode) {
  switch (mode) {
    case utility_mode::cdma_single_freq:
      return equilibrium_partition_single(x1, x2, p);
    case utility_mode::sic_single_freq:
      return sic_association_single_freq(x1, x2, p,
                                         decoding_belief::pessimistic)
          .partitions.front();
    case utility_mode::sic_two_freq:
      return sic_association_two_freq(x1, x2, p);
    case utility_mode::cdma_two_freq:
      if (x1 == x2) return sic_association_two_freq(x1, x2, p);
      return solve_fixed_point(x1, x2, p).partition;
  }
  throw std::invalid_argument("associate: unknown utility mode");
}

// Utility of BS `which` (1 or 2) located at x, given the association cells.
// Matched-filter modes integrate the SINR density over the cell; SIC modes
// take the aggregate log form. Degenerate (collocated) partitions use the
// even power split E^o(x)/2 in place of the representative cells.
inline double bs_utility(int which, double x, const cell_partition& cells,
                         const scenario_params& p, utility_mode mode) {
  p.validate();
  if (which != 1 && which != 2) {
    throw std::invalid_argument("bs_utility: BS index must be 1 or 2");
  }
  const interval_set& own = which == 1 ? cells.cell1 : cells.cell2;
  const interval_set& other = which == 1 ? cells.cell2 : cells.cell1;
  const double n2 = p.noise_power();
  const bool even_split = cells.degenerate;

  switch (mode) {
    case utility_mode::cdma_single_freq: {
      const double total = total_received_power(x, p);
      const double u = even_split ? 0.5 * total : received_power(x, own, p);
      return 0.5 * u / (total + n2);
    }
    case utility_mode::cdma_two_freq: {
      const double u = even_split ? 0.5 * total_received_power(x, p)
                                  : received_power(x, own, p);
      return 0.5 * u / (u + n2);
    }
    case utility_mode::sic_single_freq: {
      if (even_split) {
        const double half = 0.5 * total_received_power(x, p);
        return 0.5 * std::log1p(half / (half + n2));
      }
      return sic_utility_single_freq(x, own, other, p);
    }
    case utility_mode::sic_two_freq: {
      if (even_split) {
        return 0.5 * std::log1p(0.5 * total_received_power(x, p) / n2);
      }
      return sic_utility_two_freq(x, own, p);
    }
  }
  throw std::invalid_argument("bs_utility: unknown utility mode");
}

// Power received at BS 2 in its own band under nearest-BS association
// (collocated BSs split the total evenly). As a function of x2 this is
// discontinuous at x2 = x1 unless x1 = 0.
inline double received_power_sic_two_freq(double x1, double x2,
                                          const scenario_params& p) {
  p.validate();
  if (x1 == x2) return 0.5 * total_received_power(x2, p);
  const cell_partition cells = sic_association_two_freq(x1, x2, p);
  return received_power(x2, cells.cell2, p);
}

namespace detail {

inline double sum_utility(double x1, double x2, const scenario_params& p,
                          utility_mode mode) {
  const cell_partition cells = associate(x1, x2, p, mode);
  return bs_utility(1, x1, cells, p, mode) + bs_utility(2, x2, cells, p, mode);
}

// Interior stationary point of BS 2's received power on the branch where it
// sits right of BS 1 (x1 <= 0): the smaller root of the first-order
// condition (L - x2)^2 + 1 = a(1 + ((x2 - x1)/2)^2), a = 2^(2/alpha). The
// quadratic degenerates to linear at a = 4 (alpha = 1).
inline double sic_two_stationary(double x1, const scenario_params& p) {
  const double L = p.half_length;
  const double a = std::pow(2.0, 2.0 / p.alpha);
  if (a == 4.0) return 0.5 * (L + x1) - 1.5 / (L - x1);
  const double disc = a * (L - x1) * (L - x1) + (4.0 - a) * (a - 1.0);
  return (4.0 * L - a * x1 - 2.0 * std::sqrt(disc)) / (4.0 - a);
}

// Closed-form best response of BS 2 for the per-band SIC model, restricted
// to [-L, L] (best responses provably land there). Candidates: the interior
// stationary point on the right-of-BS-1 branch, the best point of the
// full-capture regime (midpoint off the left end of the segment; only
// reachable when x1 < -L), the collocated point, and the segment end. For
// x1 = 0 the problem is symmetric and both signs of the maximizer are
// returned.
inline grid_maximum sic_two_best_response2(double x1,
                                           const scenario_params& p) {
  const double L = p.half_length;
  if (x1 > 0.0) {
    grid_maximum m = sic_two_best_response2(-x1, p);
    for (double& x : m.locations) x = -x;
    std::sort(m.locations.begin(), m.locations.end());
    return m;
  }

  std::vector<double> cands;
  const double c = sic_two_stationary(x1, p);
  const double junction = -2.0 * L - x1;  // below it BS 2 captures everything
  if (c > junction && c > x1 && c <= L) cands.push_back(c);
  if (junction >= -L) {
    cands.push_back(std::clamp(0.0, -L, std::min(junction, L)));
  }
  cands.push_back(std::clamp(x1, -L, L));
  cands.push_back(L);

  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> powers(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    powers[i] = received_power_sic_two_freq(x1, cands[i], p);
    best = std::max(best, powers[i]);
  }
  grid_maximum out;
  const double tie = 1e-9 * std::max(1.0, std::abs(best));
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (powers[i] >= best - tie) out.locations.push_back(cands[i]);
  }
  if (x1 == 0.0) {
    // Mirror maximizers: the objective is even in x2 when BS 1 is at the
    // origin.
    const std::vector<double> found = out.locations;
    for (double x : found) {
      if (std::abs(x) > 1e-12) out.locations.push_back(-x);
    }
  }
  std::sort(out.locations.begin(), out.locations.end());
  std::vector<double> unique;
  for (double x : out.locations) {
    if (unique.empty() || x - unique.back() > 1e-8) unique.push_back(x);
  }
  out.locations = std::move(unique);
  out.value = 0.5 * std::log1p(best / p.noise_power());
  return out;
}

inline double pick_nearest(const std::vector<double>& xs, double target) {
  double best = xs.front();
  for (double x : xs) {
    if (std::abs(x - target) < std::abs(best - target)) best = x;
  }
  return best;
}

}  // namespace detail

// All maximizers of BS `which`'s utility over its own location in [-L, L],
// holding the other BS fixed; mobiles re-associate at every candidate.
// Per-band SIC uses the closed form; other modes scan a 401-point grid and
// refine each local maximum by golden section (the utility can jump where an
// association boundary crosses a placement, so refinement alone would be
// unsound). locations.size() > 1 flags near-ties (within 1e-9 relative).
inline grid_maximum best_response(int which, double other,
                                  const scenario_params& p,
                                  utility_mode mode) {
  p.validate();
  if (which != 1 && which != 2) {
    throw std::invalid_argument("best_response: BS index must be 1 or 2");
  }
  if (mode == utility_mode::sic_two_freq) {
    if (which == 2) return detail::sic_two_best_response2(other, p);
    // BS 1's problem is BS 2's reflected through the origin.
    grid_maximum m = detail::sic_two_best_response2(-other, p);
    for (double& x : m.locations) x = -x;
    std::sort(m.locations.begin(), m.locations.end());
    return m;
  }
  const auto objective = [&](double own) {
    const double x1 = which == 1 ? own : other;
    const double x2 = which == 1 ? other : own;
    const cell_partition cells = associate(x1, x2, p, mode);
    return bs_utility(which, own, cells, p, mode);
  };
  return detail::maximize_on_grid(objective, -p.half_length, p.half_length,
                                  401, 1e-6);
}

// Placement pair maximizing the sum of the two BS utilities, with mobiles at
// their association equilibrium.
//
// Both per-band modes have the closed-form answer (-L/2, L/2). Shared-band
// CDMA searches symmetric placements (-t, t) — the optimum is symmetric with
// the boundary at 0 — by a 401-point grid plus golden refinement;
// full_search replaces that with a two-dimensional grid over [-L, L]^2 plus
// coordinate refinement, for falsification. Shared-band SIC has no known
// structure, so it always runs the two-dimensional search, over the wider
// box [-3L, 3L]^2 because its optimum can push one BS outside the segment.
inline equilibrium_report cooperative_optimum(const scenario_params& p,
                                              utility_mode mode,
                                              bool full_search = false) {
  p.validate();
  const double L = p.half_length;
  equilibrium_report rep;

  const auto finish = [&](double x1, double x2, solve_method method) {
    rep.placements = {x1, x2};
    rep.partition = associate(x1, x2, p, mode);
    rep.utility1 = bs_utility(1, x1, rep.partition, p, mode);
    rep.utility2 = bs_utility(2, x2, rep.partition, p, mode);
    rep.method = method;
    return rep;
  };

  if (mode == utility_mode::cdma_two_freq ||
      mode == utility_mode::sic_two_freq) {
    return finish(-0.5 * L, 0.5 * L, solve_method::closed_form);
  }

  if (mode == utility_mode::cdma_single_freq && !full_search) {
    const auto sum_at = [&](double t) {
      return detail::sum_utility(-t, t, p, mode);
    };
    const grid_maximum m = detail::maximize_on_grid(sum_at, 0.0, L, 401, 1e-6);
    const double t = m.locations.back();
    return finish(-t, t, solve_method::golden_section);
  }

  // Two-dimensional search: coarse grid, then a few rounds of coordinate-wise
  // golden refinement around the best cell.
  const double box = mode == utility_mode::sic_single_freq ? 3.0 * L : L;
  const std::size_t n = 161;
  const double step = 2.0 * box / static_cast<double>(n - 1);
  double best_v = -std::numeric_limits<double>::infinity();
  double bx1 = 0.0, bx2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = -box + step * static_cast<double>(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double x2 = -box + step * static_cast<double>(j);
      const double v = detail::sum_utility(x1, x2, p, mode);
      if (v > best_v) {
        best_v = v;
        bx1 = x1;
        bx2 = x2;
      }
    }
  }
  for (int round = 0; round < 3; ++round) {
    bx1 = detail::golden_max(
        [&](double x1) { return detail::sum_utility(x1, bx2, p, mode); },
        std::max(-box, bx1 - step), std::min(box, bx1 + step), 1e-6);
    bx2 = detail::golden_max(
        [&](double x2) { return detail::sum_utility(bx1, x2, p, mode); },
        std::max(-box, bx2 - step), std::min(box, bx2 + step), 1e-6);
  }
  return finish(bx1, bx2, solve_method::grid_search);
}

// Closed-form placement equilibrium for per-band SIC (unique up to swapping
// the BSs): symmetric at +-s for long segments, collocated at the origin
// when the segment is too short (L <= sqrt(a-1)) for separation to pay.
// The result is cross-checked against the best-response map before
// returning.
inline equilibrium_report sic_two_freq_equilibrium(const scenario_params& p) {
  p.validate();
  const double L = p.half_length;
  const double a = std::pow(2.0, 2.0 / p.alpha);
  double s = 0.0;
  if (L > std::sqrt(a - 1.0)) {
    s = (-L + std::sqrt(a * L * L - (a - 1.0) * (a - 1.0))) / (a - 1.0);
  }

  equilibrium_report rep;
  rep.placements = {s == 0.0 ? 0.0 : -s, s};
  rep.partition = associate(-s, s, p, utility_mode::sic_two_freq);
  rep.utility1 =
      bs_utility(1, -s, rep.partition, p, utility_mode::sic_two_freq);
  rep.utility2 = bs_utility(2, s, rep.partition, p, utility_mode::sic_two_freq);
  rep.method = solve_method::closed_form;

  const grid_maximum br2 = best_response(2, -s, p, utility_mode::sic_two_freq);
  const grid_maximum br1 = best_response(1, s, p, utility_mode::sic_two_freq);
  const auto contains = [](const std::vector<double>& xs, double x) {
    for (double v : xs) {
      if (std::abs(v - x) <= 1e-8) return true;
    }
    return false;
  };
  if (!contains(br2.locations, s) || !contains(br1.locations, -s)) {
    throw numerical_error(
        "sic_two_freq_equilibrium: closed form failed best-response check");
  }
  return rep;
}

// Alternating (Gauss-Seidel) best responses from a starting pair: BS 1
// responds to x2, then BS 2 responds to the updated x1, until neither moves
// more than tol in a round. Among multiple maximizers the one nearest the
// BS's previous location is taken. Convergence is guaranteed only for
// per-band SIC (the closed-form response is a contraction); other modes run
// the same scheme as a heuristic. A run that exhausts max_rounds returns
// converged = false rather than throwing, so callers can inspect the trace.
inline equilibrium_report best_response_dynamics(placement_pair start,
                                                 const scenario_params& p,
                                                 utility_mode mode,
                                                 double tol = 1e-9,
                                                 std::size_t max_rounds = 10000) {
  p.validate();
  if (!(tol > 0.0)) {
    throw std::invalid_argument("best_response_dynamics: tol must be > 0");
  }
  equilibrium_report rep;
  rep.method = solve_method::br_dynamics;
  rep.converged = false;
  placement_pair cur = start;
  rep.trace.push_back(cur);
  for (std::size_t round = 0; round < max_rounds; ++round) {
    placement_pair next;
    next.x1 =
        detail::pick_nearest(best_response(1, cur.x2, p, mode).locations,
                             cur.x1);
    next.x2 =
        detail::pick_nearest(best_response(2, next.x1, p, mode).locations,
                             cur.x2);
    rep.trace.push_back(next);
    const double move = std::max(std::abs(next.x1 - cur.x1),
                                 std::abs(next.x2 - cur.x2));
    cur = next;
    if (move < tol) {
      rep.converged = true;
      break;
    }
  }
  rep.placements = cur;
  rep.partition = associate(cur.x1, cur.x2, p, mode);
  rep.utility1 = bs_utility(1, cur.x1, rep.partition, p, mode);
  rep.utility2 = bs_utility(2, cur.x2, rep.partition, p, mode);
  return rep;
}

// Symmetric placement equilibrium: the distance t with t itself a best
// response of BS 2 to BS 1 at -t. Per-band SIC takes the closed form;
// otherwise the excess rightmost(BR2(-t)) - t is scanned for a sign change
// on a coarse grid over [0, L] and bisected. Throws when no sign change is
// found (no symmetric equilibrium detected).
inline equilibrium_report symmetric_equilibrium(const scenario_params& p,
                                                utility_mode mode) {
  p.validate();
  if (mode == utility_mode::sic_two_freq) return sic_two_freq_equilibrium(p);

  const double L = p.half_length;
  const auto excess = [&](double t) {
    return best_response(2, -t, p, mode).locations.back() - t;
  };

  const std::size_t scan = 32;
  double prev_t = 0.0;
  double prev_e = excess(0.0);
  double root = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 1; i <= scan; ++i) {
    const double t = L * static_cast<double>(i) / static_cast<double>(scan);
    const double e = excess(t);
    if (prev_e == 0.0) {
      root = prev_t;
      break;
    }
    if ((prev_e > 0.0) != (e > 0.0)) {
      root = detail::bisect_root(excess, prev_t, t, 1e-8);
      break;
    }
    prev_t = t;
    prev_e = e;
  }
  if (std::isnan(root)) {
    if (prev_e == 0.0) {
      root = prev_t;
    } else {
      throw numerical_error(
          "symmetric_equilibrium: no sign change of the best-response excess "
          "on [0, L]");
    }
  }

  equilibrium_report rep;
  rep.placements = {-root, root};
  rep.partition = associate(-root, root, p, mode);
  rep.utility1 = bs_utility(1, -root, rep.partition, p, mode);
  rep.utility2 = bs_utility(2, root, rep.partition, p, mode);
  rep.method = solve_method::grid_search;
  return rep;
}

struct sweep_point {
  double location = 0.0;
  double value = 0.0;
};

// Utility of BS `which` as its own location sweeps a grid over [lo, hi],
// with the association recomputed at every point (the curves behind the
// best-response analysis; they generally contain jumps).
inline std::vector<sweep_point> sweep_utility(int which, double other,
                                              const scenario_params& p,
                                              utility_mode mode, double lo,
                                              double hi, std::size_t points) {
  p.validate();
  if (points < 2) {
    throw std::invalid_argument("sweep_utility: need at least 2 grid points");
  }
  if (!(lo < hi)) {
    throw std::invalid_argument("sweep_utility: empty sweep range");
  }
  std::vector<sweep_point> out;
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double own = lo + (hi - lo) * static_cast<double>(i) /
                                static_cast<double>(points - 1);
    const double x1 = which == 1 ? own : other;
    const double x2 = which == 1 ? other : own;
    const cell_partition cells = associate(x1, x2, p, mode);
    out.push_back({own, bs_utility(which, own, cells, p, mode)});
  }
  return out;
}

// Interior cell boundaries of a partition, reduced to the at-most-two
// distinct thresholds: theta2 is the rightmost interior boundary (NaN when
// there is none), theta1 the leftmost (NaN unless two exist).
struct threshold_info {
  std::size_t count = 0;
  double theta1 = std::numeric_limits<double>::quiet_NaN();
  double theta2 = std::numeric_limits<double>::quiet_NaN();
};

inline threshold_info partition_thresholds(const cell_partition& cells,
                                           const scenario_params& p) {
  p.validate();
  std::vector<double> es =
      cells.cell1.interior_endpoints(-p.half_length, p.half_length);
  for (double e :
       cells.cell2.interior_endpoints(-p.half_length, p.half_length)) {
    es.push_back(e);
  }
  std::sort(es.begin(), es.end());
  std::vector<double> distinct;
  for (double e : es) {
    if (distinct.empty() || e - distinct.back() > 1e-9) distinct.push_back(e);
  }
  threshold_info out;
  out.count = distinct.size();
  if (!distinct.empty()) {
    out.theta2 = distinct.back();
    if (distinct.size() >= 2) out.theta1 = distinct.front();
  }
  return out;
}

}  // namespace linecell
