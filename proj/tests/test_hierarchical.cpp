#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "linecell/hierarchical.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using namespace linecell;

namespace {

// Sum of the two BS utilities with mobiles at their association equilibrium.
double sum_utility(double x1, double x2, const scenario_params& p,
                   utility_mode mode) {
  const cell_partition cells = associate(x1, x2, p, mode);
  return bs_utility(1, x1, cells, p, mode) + bs_utility(2, x2, cells, p, mode);
}

double rightmost(const grid_maximum& m) { return m.locations.back(); }

}  // namespace

TEST_CASE("association dispatch matches the per-mode partitions") {
  scenario_params p;

  SECTION("shared-band modes reuse the matched-filter partition") {
    const cell_partition ref = equilibrium_partition_single(20.0, 0.0, p);
    for (utility_mode mode :
         {utility_mode::cdma_single_freq, utility_mode::sic_single_freq}) {
      const cell_partition got = associate(20.0, 0.0, p, mode);
      REQUIRE(got.cell1 == ref.cell1);
      REQUIRE(got.cell2 == ref.cell2);
    }
  }

  SECTION("per-band SIC splits at the midpoint") {
    const cell_partition got = associate(-4.0, 6.0, p, utility_mode::sic_two_freq);
    REQUIRE_THAT(got.cell1[0].hi, WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(got.cell2[0].lo, WithinAbs(1.0, 1e-12));
  }

  SECTION("per-band CDMA solves the ratio fixed point") {
    const cell_partition ref = solve_fixed_point(0.0, 10.0, p).partition;
    const cell_partition got = associate(0.0, 10.0, p, utility_mode::cdma_two_freq);
    REQUIRE(got.cell1 == ref.cell1);
    REQUIRE(got.cell2 == ref.cell2);
  }

  SECTION("collocated per-band CDMA degenerates instead of throwing") {
    const cell_partition got = associate(3.0, 3.0, p, utility_mode::cdma_two_freq);
    REQUIRE(got.degenerate);
    REQUIRE_THAT(got.cell1[0].hi, WithinAbs(3.0, 1e-12));
  }
}

TEST_CASE("BS utility: worked values, degenerate splits, validation") {
  scenario_params p;
  cell_partition whole;
  whole.cell1 = interval_set(-10.0, 10.0);

  SECTION("single BS serving the whole segment") {
    const double e0 = 2.0 * std::atan(10.0);
    const double u = bs_utility(1, 0.0, whole, p, utility_mode::cdma_single_freq);
    REQUIRE_THAT(u, WithinAbs(0.5 * e0 / (e0 + 0.09), 1e-12));
    REQUIRE_THAT(u, WithinAbs(0.485160, 1e-5));
    // Empty cell earns nothing in every mode.
    for (utility_mode mode :
         {utility_mode::cdma_single_freq, utility_mode::cdma_two_freq,
          utility_mode::sic_single_freq, utility_mode::sic_two_freq}) {
      REQUIRE(bs_utility(2, 0.0, whole, p, mode) == 0.0);
    }
  }

  SECTION("whole-segment utility peaks at the centre") {
    double prev = 1.0;
    for (double x : {0.0, 2.0, 5.0, 9.0}) {
      const double u =
          bs_utility(1, x, whole, p, utility_mode::cdma_single_freq);
      REQUIRE(u < prev);
      prev = u;
    }
  }

  SECTION("degenerate partitions use the even power split") {
    const cell_partition cells =
        associate(3.0, 3.0, p, utility_mode::cdma_single_freq);
    REQUIRE(cells.degenerate);
    const double e = total_received_power(3.0, p);
    const double u1 = bs_utility(1, 3.0, cells, p, utility_mode::cdma_single_freq);
    const double u2 = bs_utility(2, 3.0, cells, p, utility_mode::cdma_single_freq);
    REQUIRE_THAT(u1, WithinAbs(0.25 * e / (e + 0.09), 1e-12));
    REQUIRE(u1 == u2);

    const cell_partition split =
        associate(3.0, 3.0, p, utility_mode::cdma_two_freq);
    const double v1 = bs_utility(1, 3.0, split, p, utility_mode::cdma_two_freq);
    const double v2 = bs_utility(2, 3.0, split, p, utility_mode::cdma_two_freq);
    REQUIRE_THAT(v1, WithinAbs(0.25 * e / (0.5 * e + 0.09), 1e-12));
    REQUIRE(v1 == v2);
  }

  SECTION("BS index is validated") {
    REQUIRE_THROWS_AS(
        bs_utility(0, 0.0, whole, p, utility_mode::cdma_single_freq),
        std::invalid_argument);
    REQUIRE_THROWS_AS(
        bs_utility(3, 0.0, whole, p, utility_mode::cdma_single_freq),
        std::invalid_argument);
  }
}

TEST_CASE("own-band received power: worked values and placement jump") {
  scenario_params p;

  SECTION("worked value") {
    // BS 1 at -10, BS 2 at 0: cell 2 is [-5, 10].
    REQUIRE_THAT(received_power_sic_two_freq(-10.0, 0.0, p),
                 WithinAbs(std::atan(5.0) + std::atan(10.0), 1e-12));
  }

  SECTION("collocated placements split the total power evenly") {
    for (double x : {-3.0, 0.0, 4.0}) {
      REQUIRE_THAT(received_power_sic_two_freq(x, x, p),
                   WithinAbs(0.5 * total_received_power(x, p), 1e-15));
    }
  }

  SECTION("discontinuous where BS 2 crosses an off-centre BS 1") {
    const double left = received_power_sic_two_freq(-3.0, -3.0 - 1e-6, p);
    const double right = received_power_sic_two_freq(-3.0, -3.0 + 1e-6, p);
    const double mid = received_power_sic_two_freq(-3.0, -3.0, p);
    REQUIRE(std::abs(right - left) > 0.05);
    REQUIRE(mid > std::min(left, right));
    REQUIRE(mid < std::max(left, right));
    REQUIRE_THAT(mid, WithinAbs(0.5 * total_received_power(-3.0, p), 1e-12));

    // At x1 = 0 the two one-sided limits agree: no jump.
    const double l0 = received_power_sic_two_freq(0.0, -1e-6, p);
    const double r0 = received_power_sic_two_freq(0.0, 1e-6, p);
    REQUIRE_THAT(l0, WithinAbs(r0, 1e-5));
    REQUIRE_THAT(l0, WithinAbs(0.5 * total_received_power(0.0, p), 1e-5));
  }
}

TEST_CASE("per-band SIC best response: closed form and fixed point") {
  scenario_params p;

  SECTION("BS 1 at the origin: both mirror maximizers, exact closed form") {
    const grid_maximum m = best_response(2, 0.0, p, utility_mode::sic_two_freq);
    REQUIRE(m.locations.size() == 2);
    const double c = 20.0 - std::sqrt(202.0);
    REQUIRE_THAT(m.locations[0], WithinAbs(-c, 1e-12));
    REQUIRE_THAT(m.locations[1], WithinAbs(c, 1e-12));
    REQUIRE_THAT(
        m.value,
        WithinAbs(0.5 * std::log1p(received_power_sic_two_freq(0.0, c, p) /
                                   0.09),
                  1e-12));
  }

  SECTION("equilibrium distance is a best-response fixed point") {
    const double s = std::sqrt(199.0) - 10.0;
    const grid_maximum m = best_response(2, -s, p, utility_mode::sic_two_freq);
    REQUIRE(m.locations.size() == 1);
    REQUIRE_THAT(m.locations[0], WithinAbs(s, 1e-9));

    const grid_maximum m1 = best_response(1, s, p, utility_mode::sic_two_freq);
    REQUIRE(m1.locations.size() == 1);
    REQUIRE_THAT(m1.locations[0], WithinAbs(-s, 1e-9));
  }

  SECTION("closed form agrees with a dense scan of the power curve") {
    for (double x1 : {-12.0, -8.0, -4.1, -2.0, 0.5, 7.0}) {
      INFO("x1 = " << x1);
      const grid_maximum m = best_response(2, x1, p, utility_mode::sic_two_freq);
      const double via_grid = oracles::grid_argmax(
          [&](double x2) { return received_power_sic_two_freq(x1, x2, p); },
          -10.0, 10.0);
      // Compare against the nearest closed-form maximizer (the scan picks one
      // of the tied pair arbitrarily when x1 = 0).
      double nearest = m.locations.front();
      for (double x : m.locations) {
        if (std::abs(x - via_grid) < std::abs(nearest - via_grid)) nearest = x;
      }
      REQUIRE_THAT(nearest, WithinAbs(via_grid, 1e-4));
      REQUIRE(received_power_sic_two_freq(x1, nearest, p) >=
              received_power_sic_two_freq(x1, via_grid, p) - 1e-9);
    }
  }
}

TEST_CASE("best responses stay on the segment") {
  scenario_params p;
  std::mt19937_64 rng(7711u);
  std::uniform_real_distribution<double> pos(-30.0, 30.0);

  for (int trial = 0; trial < 100; ++trial) {
    const double x1 = pos(rng);
    INFO("trial " << trial << ": x1 = " << x1);
    const grid_maximum m = best_response(2, x1, p, utility_mode::sic_two_freq);
    REQUIRE_FALSE(m.locations.empty());
    for (double x : m.locations) {
      REQUIRE(x >= -10.0);
      REQUIRE(x <= 10.0);
    }
    // For a rival on the segment, the responder crosses to the other side
    // of the centre (far-out rivals instead pull the response back toward
    // the middle, which can land it slightly on their side of 0).
    if (x1 >= -10.0 && x1 <= 0.0) REQUIRE(rightmost(m) >= -1e-12);
    if (x1 >= 0.0 && x1 <= 10.0) REQUIRE(m.locations.front() <= 1e-12);
  }

  for (utility_mode mode :
       {utility_mode::cdma_single_freq, utility_mode::cdma_two_freq}) {
    for (double other : {-25.0, -3.0, 4.0}) {
      const grid_maximum m = best_response(2, other, p, mode);
      for (double x : m.locations) {
        REQUIRE(x >= -10.0);
        REQUIRE(x <= 10.0);
      }
    }
  }
}

TEST_CASE("per-band SIC best response is a contraction") {
  scenario_params p;
  const double h = 1e-4;
  for (int i = 0; i <= 40; ++i) {
    const double x1 = -9.9 + 9.8 * i / 40.0;
    const grid_maximum lo = best_response(2, x1 - h, p, utility_mode::sic_two_freq);
    const grid_maximum hi = best_response(2, x1 + h, p, utility_mode::sic_two_freq);
    REQUIRE(lo.locations.size() == 1);
    REQUIRE(hi.locations.size() == 1);
    const double slope = (hi.locations[0] - lo.locations[0]) / (2.0 * h);
    INFO("x1 = " << x1 << ", slope = " << slope);
    REQUIRE(slope > 0.0);
    REQUIRE(slope < 1.0);
  }
}

TEST_CASE("per-band SIC placement equilibrium: closed form") {
  scenario_params p;

  SECTION("worked value and first-order condition") {
    const equilibrium_report rep = sic_two_freq_equilibrium(p);
    const double s = std::sqrt(199.0) - 10.0;
    REQUIRE(rep.method == solve_method::closed_form);
    REQUIRE(rep.converged);
    REQUIRE_THAT(rep.placements.x2, WithinAbs(s, 1e-12));
    REQUIRE_THAT(rep.placements.x2, WithinAbs(4.1067359797, 1e-9));
    REQUIRE_THAT(rep.placements.x1, WithinAbs(-s, 1e-12));

    // Stationarity of the received power: (L-s)^2 + 1 = a (1 + s^2), a = 2.
    const double foc = (10.0 - s) * (10.0 - s) + 1.0 - 2.0 * (1.0 + s * s);
    REQUIRE_THAT(foc, WithinAbs(0.0, 1e-8));

    const double expect_u =
        0.5 * std::log1p((std::atan(s) + std::atan(10.0 - s)) / 0.09);
    REQUIRE_THAT(rep.utility1, WithinAbs(expect_u, 1e-12));
    REQUIRE_THAT(rep.utility2, WithinAbs(expect_u, 1e-12));
  }

  SECTION("short segments collapse to collocation at the origin") {
    for (double L : {1.0, 0.5}) {
      scenario_params q;
      q.half_length = L;
      const equilibrium_report rep = sic_two_freq_equilibrium(q);
      INFO("L = " << L);
      REQUIRE(rep.placements.x1 == 0.0);
      REQUIRE(rep.placements.x2 == 0.0);
      REQUIRE(rep.partition.degenerate);
      REQUIRE(rep.utility1 == rep.utility2);
    }
  }

  SECTION("other path-loss exponents keep the first-order condition") {
    for (double alpha : {1.0, 3.0}) {
      scenario_params q;
      q.alpha = alpha;
      const equilibrium_report rep = sic_two_freq_equilibrium(q);
      const double a = std::pow(2.0, 2.0 / alpha);
      const double s = rep.placements.x2;
      INFO("alpha = " << alpha << ", s = " << s);
      REQUIRE(s > 0.0);
      REQUIRE(s < 10.0);
      const double foc =
          (10.0 - s) * (10.0 - s) + 1.0 - a * (1.0 + s * s);
      REQUIRE_THAT(foc, WithinAbs(0.0, 1e-6));
    }
  }
}

TEST_CASE("alternating best responses converge to the placement equilibrium") {
  scenario_params p;
  const double s = std::sqrt(199.0) - 10.0;

  SECTION("standard start") {
    const equilibrium_report rep = best_response_dynamics(
        {-5.0, 5.0}, p, utility_mode::sic_two_freq);
    REQUIRE(rep.converged);
    REQUIRE(rep.method == solve_method::br_dynamics);
    REQUIRE(rep.trace.size() >= 2);
    REQUIRE(rep.trace.size() <= 21);
    REQUIRE_THAT(rep.placements.x1, WithinAbs(-s, 1e-6));
    REQUIRE_THAT(rep.placements.x2, WithinAbs(s, 1e-6));
    REQUIRE(rep.trace.front().x1 == -5.0);
  }

  SECTION("starting at the equilibrium stops after one round") {
    const equilibrium_report rep =
        best_response_dynamics({-s, s}, p, utility_mode::sic_two_freq);
    REQUIRE(rep.converged);
    REQUIRE(rep.trace.size() == 2);
  }

  SECTION("swapped start converges to the mirrored equilibrium") {
    const equilibrium_report rep =
        best_response_dynamics({12.0, -12.0}, p, utility_mode::sic_two_freq);
    REQUIRE(rep.converged);
    REQUIRE_THAT(rep.placements.x1, WithinAbs(s, 1e-6));
    REQUIRE_THAT(rep.placements.x2, WithinAbs(-s, 1e-6));
  }

  SECTION("random starts all reach an equilibrium pair") {
    std::mt19937_64 rng(553311u);
    std::uniform_real_distribution<double> pos(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
      const placement_pair start{pos(rng), pos(rng)};
      INFO("trial " << trial << ": start (" << start.x1 << ", " << start.x2
                    << ")");
      const equilibrium_report rep =
          best_response_dynamics(start, p, utility_mode::sic_two_freq, 1e-9, 200);
      REQUIRE(rep.converged);
      REQUIRE(rep.trace.size() <= 101);
      REQUIRE_THAT(std::abs(rep.placements.x1), WithinAbs(s, 1e-6));
      REQUIRE_THAT(std::abs(rep.placements.x2), WithinAbs(s, 1e-6));
      REQUIRE(rep.placements.x1 * rep.placements.x2 < 0.0);
    }
  }

  SECTION("exhausting the round budget reports rather than throws") {
    const equilibrium_report rep = best_response_dynamics(
        {-5.0, 5.0}, p, utility_mode::sic_two_freq, 1e-9, 1);
    REQUIRE_FALSE(rep.converged);
    REQUIRE(rep.trace.size() == 2);
  }

  SECTION("tolerance is validated") {
    REQUIRE_THROWS_AS(best_response_dynamics({0.0, 1.0}, p,
                                             utility_mode::sic_two_freq, 0.0),
                      std::invalid_argument);
  }

  SECTION("shared-band CDMA dynamics settle at the symmetric equilibrium") {
    const equilibrium_report rep = best_response_dynamics(
        {-5.0, 5.0}, p, utility_mode::cdma_single_freq, 1e-5, 100);
    REQUIRE(rep.converged);
    REQUIRE_THAT(rep.placements.x2, WithinAbs(7.3521, 5e-3));
    REQUIRE_THAT(rep.placements.x1, WithinAbs(-7.3521, 5e-3));
  }
}

TEST_CASE("cooperative placements: per-band closed forms and power bounds") {
  scenario_params p;
  const double quarter_power = 2.0 * std::atan(5.0);  // cell power at (-5, 5)

  SECTION("per-band CDMA: quarter points, boundary at the origin") {
    const equilibrium_report rep =
        cooperative_optimum(p, utility_mode::cdma_two_freq);
    REQUIRE(rep.method == solve_method::closed_form);
    REQUIRE(rep.placements.x1 == -5.0);
    REQUIRE(rep.placements.x2 == 5.0);
    REQUIRE(rep.partition.boundary.has_value());
    REQUIRE_THAT(rep.partition.cell1[0].hi, WithinAbs(0.0, 1e-6));
    REQUIRE_THAT(rep.utility1 + rep.utility2,
                 WithinAbs(quarter_power / (quarter_power + 0.09), 1e-9));
    REQUIRE_THAT(rep.utility1 + rep.utility2, WithinAbs(0.96827413, 1e-6));
  }

  SECTION("no placement pair beats the per-band CDMA bound") {
    // Concavity bound: with each cell's power at most u* = power collected
    // from a half segment at distance L/2, the sum of u/(u + n) terms is
    // maximized exactly at the quarter points.
    const double bound = quarter_power / (quarter_power + 0.09);
    for (const auto& xs :
         {placement_pair{0.0, 10.0}, placement_pair{-3.0, 8.0},
          placement_pair{-5.0, 5.0}, placement_pair{2.0, 7.0}}) {
      INFO("x1=" << xs.x1 << " x2=" << xs.x2);
      const double sum = sum_utility(xs.x1, xs.x2, p, utility_mode::cdma_two_freq);
      REQUIRE(sum <= bound + 1e-9);
    }
    REQUIRE_THAT(sum_utility(-5.0, 5.0, p, utility_mode::cdma_two_freq),
                 WithinAbs(bound, 1e-9));
  }

  SECTION("no symmetric split collects more total power than the quarter points") {
    double best = 0.0;
    for (int i = 0; i <= 40; ++i) {
      const double t = 10.0 * i / 40.0;
      for (int j = 0; j <= 40; ++j) {
        const double split = -10.0 + 20.0 * j / 40.0;
        const double collected =
            received_power(-t, interval_set(-10.0, split), p) +
            received_power(t, interval_set(split, 10.0), p);
        best = std::max(best, collected);
      }
    }
    REQUIRE(best <= 2.0 * quarter_power + 1e-9);
  }

  SECTION("per-band SIC: same placements, log utilities") {
    const equilibrium_report rep =
        cooperative_optimum(p, utility_mode::sic_two_freq);
    REQUIRE(rep.method == solve_method::closed_form);
    REQUIRE(rep.placements.x1 == -5.0);
    REQUIRE(rep.placements.x2 == 5.0);
    REQUIRE_THAT(rep.utility2,
                 WithinAbs(0.5 * std::log1p(quarter_power / 0.09), 1e-12));
    REQUIRE(rep.utility1 == rep.utility2);
  }
}

TEST_CASE("cooperative placements: shared-band searches") {
  scenario_params p;
  p.sigma = 0.4;

  SECTION("symmetric search matches the published spread") {
    const equilibrium_report rep =
        cooperative_optimum(p, utility_mode::cdma_single_freq);
    REQUIRE(rep.method == solve_method::golden_section);
    REQUIRE_THAT(rep.placements.x1, WithinAbs(-rep.placements.x2, 1e-9));
    REQUIRE_THAT(rep.placements.x2, WithinAbs(7.7452, 1e-2));
  }

  SECTION("unrestricted grid search finds nothing better") {
    const equilibrium_report sym =
        cooperative_optimum(p, utility_mode::cdma_single_freq);
    const equilibrium_report full =
        cooperative_optimum(p, utility_mode::cdma_single_freq, true);
    REQUIRE(full.method == solve_method::grid_search);
    const double sum_sym = sym.utility1 + sym.utility2;
    const double sum_full = full.utility1 + full.utility2;
    REQUIRE_THAT(sum_full, WithinAbs(sum_sym, 1e-5));
    const double lo = std::min(full.placements.x1, full.placements.x2);
    const double hi = std::max(full.placements.x1, full.placements.x2);
    REQUIRE_THAT(lo, WithinAbs(-sym.placements.x2, 0.05));
    REQUIRE_THAT(hi, WithinAbs(sym.placements.x2, 0.05));
  }

  SECTION("shared-band SIC search beats simple probes") {
    scenario_params q;  // default noise
    const equilibrium_report rep =
        cooperative_optimum(q, utility_mode::sic_single_freq);
    REQUIRE(rep.method == solve_method::grid_search);
    const double sum = rep.utility1 + rep.utility2;
    for (const auto& xs :
         {placement_pair{-5.0, 5.0}, placement_pair{0.0, 0.0},
          placement_pair{-15.0, 15.0}, placement_pair{-12.0, 8.0}}) {
      INFO("probe x1=" << xs.x1 << " x2=" << xs.x2);
      REQUIRE(sum >= sum_utility(xs.x1, xs.x2, q, utility_mode::sic_single_freq) -
                         1e-9);
    }
  }
}

TEST_CASE("symmetric placement equilibria for shared-band CDMA") {
  SECTION("moderate noise") {
    scenario_params p;  // sigma = 0.3
    const equilibrium_report rep =
        symmetric_equilibrium(p, utility_mode::cdma_single_freq);
    REQUIRE(rep.method == solve_method::grid_search);
    REQUIRE_THAT(rep.placements.x2, WithinAbs(7.35209, 1e-3));
    REQUIRE_THAT(rep.placements.x1, WithinAbs(-rep.placements.x2, 1e-12));
    REQUIRE_THAT(rep.utility1, WithinAbs(rep.utility2, 1e-9));

    // The placement is a best-response fixed point up to search tolerance.
    const grid_maximum br = best_response(2, rep.placements.x1, p,
                                          utility_mode::cdma_single_freq);
    REQUIRE_THAT(rightmost(br), WithinAbs(rep.placements.x2, 1e-4));
  }

  SECTION("low noise pushes the equilibrium outward") {
    scenario_params p;
    p.sigma = 0.1;
    const equilibrium_report rep =
        symmetric_equilibrium(p, utility_mode::cdma_single_freq);
    REQUIRE_THAT(rep.placements.x2, WithinAbs(8.2389, 1e-3));
  }

  SECTION("per-band CDMA sits well inside the per-band SIC spread") {
    scenario_params p;  // sigma = 0.3
    const equilibrium_report rep =
        symmetric_equilibrium(p, utility_mode::cdma_two_freq);
    REQUIRE_THAT(rep.placements.x2, WithinAbs(4.13303, 1e-3));
    REQUIRE_THAT(rep.placements.x1, WithinAbs(-rep.placements.x2, 1e-12));
  }

  SECTION("per-band SIC delegates to the closed form") {
    scenario_params p;
    const equilibrium_report rep =
        symmetric_equilibrium(p, utility_mode::sic_two_freq);
    REQUIRE(rep.method == solve_method::closed_form);
    REQUIRE_THAT(rep.placements.x2, WithinAbs(std::sqrt(199.0) - 10.0, 1e-12));
  }
}

TEST_CASE("placement rearrangements never lower the fixed-cell sum") {
  // Fixed-cell utilities in the shared band: only the BS's own position
  // enters the denominator, so cells can be held fixed while placements move.
  scenario_params p;
  const auto fixed_cell_utility = [&](double x, const interval_set& own) {
    return 0.5 * received_power(x, own, p) /
           (total_received_power(x, p) + p.noise_power());
  };
  std::mt19937_64 rng(424242u);

  SECTION("reflecting an off-side BS toward its cell's heavy end") {
    std::uniform_real_distribution<double> left(-25.0, -0.5);
    int valid = 0;
    int improved = 0;
    for (int draws = 0; draws < 1000 && valid < 100; ++draws) {
      const double x1 = left(rng);
      std::uniform_real_distribution<double> upto(x1 + 0.1, 0.0);
      const double x2 = upto(rng);
      const cell_partition cells = equilibrium_partition_single(x1, x2, p);
      if (cells.cell2.size() != 1 || cells.cell2.measure() <= 0.0) continue;
      ++valid;

      const interval_set& a2 = cells.cell2;
      const double lo = a2[0].lo;
      const double hi = a2[0].hi;
      const double old_sum = fixed_cell_utility(x1, cells.cell1) +
                             fixed_cell_utility(x2, a2);
      double new_sum;
      if (-lo < hi) {
        // Cell mass already leans right: move BS 2 to the mirror point.
        new_sum = fixed_cell_utility(x1, cells.cell1) +
                  fixed_cell_utility(-x2, a2);
      } else {
        // Otherwise reflect the cell too; BS 1 inherits the near side.
        const interval_set reflected(-hi, -lo);
        new_sum = fixed_cell_utility(x1, reflected.complement_within(-10.0, 10.0)) +
                  fixed_cell_utility(-x2, reflected);
      }
      INFO("x1=" << x1 << " x2=" << x2 << " cell2=[" << lo << "," << hi << "]");
      REQUIRE(new_sum >= old_sum - 1e-12);
      if (new_sum > old_sum + 1e-12) ++improved;
    }
    REQUIRE(valid == 100);
    REQUIRE(improved > 50);
  }

  SECTION("sliding an interior cell to the segment end convexifies the rival") {
    std::uniform_real_distribution<double> left(-20.0, -3.0);
    int valid = 0;
    int improved = 0;
    for (int draws = 0; draws < 2000 && valid < 100; ++draws) {
      const double x1 = left(rng);
      std::uniform_real_distribution<double> inner(0.0, std::min(-x1, 9.0));
      const double x2 = inner(rng);
      const cell_partition cells = equilibrium_partition_single(x1, x2, p);
      if (cells.cell2.size() != 1 || cells.cell1.size() != 2) continue;
      const double lo = cells.cell2[0].lo;
      const double hi = cells.cell2[0].hi;
      if (lo <= -10.0 + 1e-6 || hi >= 10.0 - 1e-6) continue;
      ++valid;

      const double shift = 10.0 - hi;
      const interval_set slid(lo + shift, 10.0);
      const double old_sum = fixed_cell_utility(x1, cells.cell1) +
                             fixed_cell_utility(x2, cells.cell2);
      const double new_sum =
          fixed_cell_utility(x1, interval_set(-10.0, lo + shift)) +
          fixed_cell_utility(x2 + shift, slid);
      INFO("x1=" << x1 << " x2=" << x2 << " cell2=[" << lo << "," << hi << "]");
      REQUIRE(new_sum >= old_sum - 1e-12);
      if (new_sum > old_sum + 1e-12) ++improved;
    }
    REQUIRE(valid == 100);
    REQUIRE(improved > 90);
  }
}

TEST_CASE("partition thresholds classify the cell boundaries") {
  scenario_params p;

  SECTION("two interior boundaries") {
    const cell_partition cells = equilibrium_partition_single(-2.0, 20.0, p);
    const threshold_info t = partition_thresholds(cells, p);
    REQUIRE(t.count == 2);
    REQUIRE(t.theta1 < t.theta2);
    REQUIRE_FALSE(std::isnan(t.theta1));
  }

  SECTION("one boundary at the origin") {
    const cell_partition cells = equilibrium_partition_single(-5.0, 5.0, p);
    const threshold_info t = partition_thresholds(cells, p);
    REQUIRE(t.count == 1);
    REQUIRE_THAT(t.theta2, WithinAbs(0.0, 1e-9));
    REQUIRE(std::isnan(t.theta1));
  }

  SECTION("no interior boundary when one cell is empty") {
    const cell_partition cells = equilibrium_partition_single(0.0, 500.0, p);
    const threshold_info t = partition_thresholds(cells, p);
    REQUIRE(t.count == 0);
    REQUIRE(std::isnan(t.theta1));
    REQUIRE(std::isnan(t.theta2));
  }
}

TEST_CASE("utility sweeps: consistency, the near-collocation jump, validation") {
  scenario_params p;

  SECTION("sweep points reproduce the pointwise utility") {
    const auto pts = sweep_utility(2, -10.0, p, utility_mode::cdma_single_freq,
                                   -12.0, 12.0, 25);
    REQUIRE(pts.size() == 25);
    REQUIRE(pts.front().location == -12.0);
    REQUIRE(pts.back().location == 12.0);
    for (std::size_t i = 0; i < pts.size(); i += 6) {
      const cell_partition cells =
          associate(-10.0, pts[i].location, p, utility_mode::cdma_single_freq);
      REQUIRE(pts[i].value == bs_utility(2, pts[i].location, cells, p,
                                         utility_mode::cdma_single_freq));
    }
  }

  SECTION("utility jumps where BS 2 crosses a far-out BS 1") {
    const auto pts = sweep_utility(2, -10.0, p, utility_mode::cdma_single_freq,
                                   -12.0, 12.0, 481);
    double jump = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double mid = 0.5 * (pts[i - 1].location + pts[i].location);
      if (mid < -10.2 || mid > -9.8) continue;
      jump = std::max(jump, std::abs(pts[i].value - pts[i - 1].value));
    }
    REQUIRE(jump > 0.02);
  }

  SECTION("sweep arguments are validated") {
    REQUIRE_THROWS_AS(sweep_utility(2, 0.0, p, utility_mode::cdma_single_freq,
                                    -1.0, 1.0, 1),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(sweep_utility(2, 0.0, p, utility_mode::cdma_single_freq,
                                    1.0, 1.0, 10),
                      std::invalid_argument);
  }
}

TEST_CASE("rightmost threshold is non-monotone in the far placement") {
  scenario_params p;
  std::vector<double> theta;
  for (int i = 0; i <= 120; ++i) {
    const double x2 = 30.0 * i / 120.0;
    const cell_partition cells =
        associate(-2.0, x2, p, utility_mode::cdma_single_freq);
    const threshold_info t = partition_thresholds(cells, p);
    REQUIRE_FALSE(std::isnan(t.theta2));
    theta.push_back(t.theta2);
  }
  int direction_changes = 0;
  int last_dir = 0;
  for (std::size_t i = 1; i < theta.size(); ++i) {
    const double d = theta[i] - theta[i - 1];
    if (std::abs(d) < 1e-9) continue;
    const int dir = d > 0.0 ? 1 : -1;
    if (last_dir != 0 && dir != last_dir) ++direction_changes;
    last_dir = dir;
  }
  REQUIRE(direction_changes >= 2);
}
