#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "linecell/assoc_single.hpp"
#include "linecell/modes.hpp"
#include "linecell/pathloss.hpp"

namespace linecell {

// Finite stand-in for the mobile continuum: n mobiles evenly spaced on
// [-L, L] at the midpoints of n equal slots, each transmitting power equal
// to its slot width, so the population carries the same total power 2L as
// the continuum it approximates.
struct discrete_population {
  std::size_t count = 0;
  double half_length = 10.0;

  double spacing() const {
    return 2.0 * half_length / static_cast<double>(count);
  }

  double position(std::size_t j) const {
    return -half_length + (static_cast<double>(j) + 0.5) * spacing();
  }

  void validate() const {
    if (count == 0) {
      throw std::invalid_argument("discrete_population: count must be > 0");
    }
    if (!(half_length > 0.0)) {
      throw std::invalid_argument(
          "discrete_population: half_length must be > 0");
    }
  }
};

namespace detail {

// Neumaier-compensated accumulator: keeps the running error of each add in a
// separate term so that long sums (and the telescoping-exactness claims that
// depend on them) do not drift.
struct compensated_sum {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + compensation; }
};

inline void validate_indices(const std::vector<std::size_t>& subset,
                             const discrete_population& pop) {
  for (std::size_t j : subset) {
    if (j >= pop.count) {
      throw std::invalid_argument("fluid: mobile index out of range");
    }
  }
}

}  // namespace detail

// Riemann sum of the received power from the listed mobiles: midpoint-rule
// approximation of received_power, O(1/n^2) accurate for the smooth kernel.
inline double discrete_received_power(double x,
                                      const std::vector<std::size_t>& subset,
                                      const discrete_population& pop,
                                      const scenario_params& p) {
  p.validate();
  pop.validate();
  detail::validate_indices(subset, pop);
  const double dy = pop.spacing();
  detail::compensated_sum acc;
  for (std::size_t j : subset) {
    acc.add(path_gain(pop.position(j) - x, p) * dy);
  }
  return acc.value();
}

// Aggregate throughput of a SIC receiver at x decoding the given mobiles in
// the given order (a permutation of `subset`): each mobile is decoded
// against the noise plus the power of the mobiles not yet decoded. The sum
// telescopes to (1/2)ln(1 + E_n/sigma^2) in exact arithmetic for every
// order; computing it order-by-order (with compensated accumulation) lets
// tests confirm that numerically.
inline double discrete_sic_throughput(double x,
                                      const std::vector<std::size_t>& subset,
                                      const std::vector<std::size_t>& order,
                                      const discrete_population& pop,
                                      const scenario_params& p) {
  p.validate();
  pop.validate();
  detail::validate_indices(subset, pop);
  std::vector<std::size_t> a = subset;
  std::vector<std::size_t> b = order;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b || std::adjacent_find(a.begin(), a.end()) != a.end()) {
    throw std::invalid_argument(
        "discrete_sic_throughput: order must permute the subset");
  }

  const double n2 = p.noise_power();
  const double dy = pop.spacing();
  detail::compensated_sum uncancelled;  // power of not-yet-decoded mobiles
  detail::compensated_sum rate;
  for (std::size_t k = order.size(); k-- > 0;) {
    const double power = path_gain(pop.position(order[k]) - x, p) * dy;
    rate.add(0.5 * std::log1p(power / (n2 + uncancelled.value())));
    uncancelled.add(power);
  }
  return rate.value();
}

struct equilibrium_check_result {
  std::size_t violations = 0;
  std::size_t checked = 0;
};

// Checks a continuum partition against the discrete population: every mobile
// (outside a one-spacing band around each interior cell boundary, which the
// grid cannot resolve) must weakly prefer its assigned BS under the
// mode-appropriate SINR comparison, with interference powers evaluated on
// the discrete population itself.
inline equilibrium_check_result discrete_equilibrium_check(
    const cell_partition& cells, double x1, double x2,
    const scenario_params& p, const discrete_population& pop,
    utility_mode mode,
    decoding_belief belief = decoding_belief::optimistic) {
  p.validate();
  pop.validate();
  const double n2 = p.noise_power();
  const double dy = pop.spacing();

  detail::compensated_sum at1_own, at1_other, at2_own, at2_other;
  std::vector<int> member(pop.count, 0);
  for (std::size_t j = 0; j < pop.count; ++j) {
    const double y = pop.position(j);
    const bool in1 = cells.cell1.contains(y);
    member[j] = in1 ? 1 : (cells.cell2.contains(y) ? 2 : 0);
    if (member[j] == 1) {
      at1_own.add(path_gain(y - x1, p) * dy);
      at2_other.add(path_gain(y - x2, p) * dy);
    } else if (member[j] == 2) {
      at2_own.add(path_gain(y - x2, p) * dy);
      at1_other.add(path_gain(y - x1, p) * dy);
    }
  }

  double den1 = n2, den2 = n2;
  switch (mode) {
    case utility_mode::cdma_single_freq:
      den1 = at1_own.value() + at1_other.value() + n2;
      den2 = at2_own.value() + at2_other.value() + n2;
      break;
    case utility_mode::cdma_two_freq:
      den1 = at1_own.value() + n2;
      den2 = at2_own.value() + n2;
      break;
    case utility_mode::sic_single_freq:
      if (belief == decoding_belief::optimistic) {
        // Decoded last: only the other cell's uncancelled power interferes.
        den1 = at1_other.value() + n2;
        den2 = at2_other.value() + n2;
      } else {
        // Decoded first: everything interferes, as with matched filters.
        den1 = at1_own.value() + at1_other.value() + n2;
        den2 = at2_own.value() + at2_other.value() + n2;
      }
      break;
    case utility_mode::sic_two_freq:
      // Own band, own cell cancelled: noise only; comparison reduces to
      // nearest-BS.
      break;
  }

  std::vector<double> boundaries =
      cells.cell1.interior_endpoints(-p.half_length, p.half_length);
  for (double e :
       cells.cell2.interior_endpoints(-p.half_length, p.half_length)) {
    boundaries.push_back(e);
  }

  equilibrium_check_result out;
  for (std::size_t j = 0; j < pop.count; ++j) {
    const double y = pop.position(j);
    bool near_boundary = false;
    for (double e : boundaries) {
      if (std::abs(y - e) <= dy) {
        near_boundary = true;
        break;
      }
    }
    if (near_boundary) continue;
    ++out.checked;
    if (member[j] == 0) {
      ++out.violations;  // partition fails to cover this mobile
      continue;
    }
    const double s1 = path_gain(y - x1, p) / den1;
    const double s2 = path_gain(y - x2, p) / den2;
    const double margin = 1e-9 * std::max(s1, s2);
    if (member[j] == 1 ? (s1 + margin < s2) : (s2 + margin < s1)) {
      ++out.violations;
    }
  }
  return out;
}

}  // namespace linecell
