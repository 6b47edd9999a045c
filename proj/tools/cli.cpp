#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "linecell/fluid.hpp"
#include "linecell/geometry2d.hpp"
#include "linecell/hierarchical.hpp"

namespace linecell_cli {
namespace {

using namespace linecell;

// Data values: 9 significant digits — below solver tolerance, above float
// noise — with non-finite values normalized so output is platform-stable.
std::string fmt9(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Configuration echo: shortest exact representation, so feeding the recorded
// arguments back reproduces the run bit-for-bit.
std::string fmt_exact(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_intervals(const interval_set& s) {
  if (s.size() == 0) return "-";
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) out += '|';
    out += fmt9(s[i].lo);
    out += "..";
    out += fmt9(s[i].hi);
  }
  return out;
}

utility_mode parse_mode(const std::string& name) {
  if (name == "cdma-single") return utility_mode::cdma_single_freq;
  if (name == "cdma-two") return utility_mode::cdma_two_freq;
  if (name == "sic-single") return utility_mode::sic_single_freq;
  if (name == "sic-two") return utility_mode::sic_two_freq;
  throw std::invalid_argument("unknown mode: " + name);
}

const char* method_name(solve_method m) {
  switch (m) {
    case solve_method::closed_form: return "closed-form";
    case solve_method::grid_search: return "grid-search";
    case solve_method::golden_section: return "golden-section";
    case solve_method::br_dynamics: return "br-dynamics";
  }
  return "unknown";
}

struct boundary_columns {
  double ratio = std::numeric_limits<double>::quiet_NaN();
  double tau = std::numeric_limits<double>::quiet_NaN();
  double center = std::numeric_limits<double>::quiet_NaN();
  double radius = std::numeric_limits<double>::quiet_NaN();
};

boundary_columns boundary_of(const cell_partition& cells) {
  boundary_columns b;
  if (cells.boundary) {
    b.ratio = cells.boundary->ratio;
    b.tau = cells.boundary->tau;
    b.center = cells.boundary->center;
    b.radius = cells.boundary->radius;
  }
  return b;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "linecell: SINR cell partitions and base-station placement analysis "
      "for two BSs serving a segment of mobiles"};
  app.require_subcommand(1);

  double L = 10.0, alpha = 2.0, sigma = 0.3;
  double x1 = 0.0, x2 = 0.0, other = 0.0;
  double lo = 0.0, hi = 0.0, tol = 1e-9, obs = 0.3, ratio = 0.5;
  double p1x = 0.0, p1y = 0.0, p2x = 0.0, p2y = 0.0;
  std::string mode = "cdma-single", belief = "optimistic";
  std::string kind = "cooperative", quantity = "utility", outfile;
  int which = 2;
  std::size_t points = 481, max_rounds = 10000, count = 1000, doublings = 2;
  bool full_search = false, sigma_given = false;

  const auto add_scenario = [&](CLI::App* cmd) {
    cmd->add_option("--L", L, "half-length of the mobile segment [-L, L]");
    cmd->add_option("--alpha", alpha, "path-loss exponent (>= 1)");
    cmd->add_option("--sigma", sigma, "thermal noise standard deviation");
  };
  const auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", outfile, "also write the output to this file");
  };
  const auto mode_check =
      CLI::IsMember({"cdma-single", "cdma-two", "sic-single", "sic-two"});

  CLI::App* c_cells = app.add_subcommand(
      "cells", "association cell partition for fixed placements");
  c_cells->add_option("--mode", mode, "physical-layer model")->check(mode_check);
  c_cells->add_option("--x1", x1, "BS 1 location")->required();
  c_cells->add_option("--x2", x2, "BS 2 location")->required();
  c_cells->add_option("--belief", belief,
                      "decoding-order assumption for shared-band SIC")
      ->check(CLI::IsMember({"optimistic", "pessimistic"}));
  add_scenario(c_cells);
  add_out(c_cells);

  CLI::App* c_fixed = app.add_subcommand(
      "fixed-point", "two-frequency interference-ratio fixed point with trace");
  c_fixed->add_option("--x1", x1, "BS 1 location")->required();
  c_fixed->add_option("--x2", x2, "BS 2 location")->required();
  c_fixed->add_option("--tol", tol, "iteration stopping tolerance");
  add_scenario(c_fixed);
  add_out(c_fixed);

  CLI::App* c_br = app.add_subcommand(
      "best-response", "all utility maximizers of one BS given the other");
  c_br->add_option("--which", which, "responding BS (1 or 2)")
      ->check(CLI::Range(1, 2));
  c_br->add_option("--other", other, "fixed location of the other BS")
      ->required();
  c_br->add_option("--mode", mode, "physical-layer model")->check(mode_check);
  add_scenario(c_br);
  add_out(c_br);

  CLI::App* c_eq = app.add_subcommand(
      "equilibrium", "cooperative optimum or competitive placement equilibrium");
  c_eq->add_option("--kind", kind, "cooperative or competitive")
      ->check(CLI::IsMember({"cooperative", "competitive"}));
  c_eq->add_option("--mode", mode, "physical-layer model")->check(mode_check);
  c_eq->add_flag("--full-search", full_search,
                 "use the unrestricted 2D placement search where applicable");
  add_scenario(c_eq);
  add_out(c_eq);

  CLI::App* c_dyn = app.add_subcommand(
      "dynamics", "alternating best-response trajectory of the placements");
  c_dyn->add_option("--x1", x1, "starting BS 1 location")->required();
  c_dyn->add_option("--x2", x2, "starting BS 2 location")->required();
  c_dyn->add_option("--mode", mode, "physical-layer model")->check(mode_check);
  c_dyn->add_option("--tol", tol, "per-round movement below which to stop");
  c_dyn->add_option("--max-rounds", max_rounds, "round budget");
  add_scenario(c_dyn);
  add_out(c_dyn);

  CLI::App* c_sweep = app.add_subcommand(
      "sweep", "utility or threshold curve as one BS location sweeps a range");
  c_sweep->add_option("--which", which, "swept BS (1 or 2)")
      ->check(CLI::Range(1, 2));
  c_sweep->add_option("--other", other, "fixed location of the other BS")
      ->required();
  c_sweep->add_option("--mode", mode, "physical-layer model")->check(mode_check);
  c_sweep->add_option("--quantity", quantity, "utility or thresholds")
      ->check(CLI::IsMember({"utility", "thresholds"}));
  c_sweep->add_option("--lo", lo, "sweep range start")->required();
  c_sweep->add_option("--hi", hi, "sweep range end")->required();
  c_sweep->add_option("--points", points, "grid points");
  add_scenario(c_sweep);
  add_out(c_sweep);

  CLI::App* c_t1 = app.add_subcommand(
      "table1", "cooperative vs competitive symmetric placements per noise level");
  c_t1->add_option("--sigma", sigma, "single noise level instead of the sweep");
  c_t1->add_option("--L", L, "half-length of the mobile segment [-L, L]");
  c_t1->add_option("--alpha", alpha, "path-loss exponent (>= 1)");
  add_out(c_t1);

  CLI::App* c_t2 = app.add_subcommand(
      "table2", "two-frequency ratio brackets for the reference placements");
  add_scenario(c_t2);
  add_out(c_t2);

  CLI::App* c_oracle = app.add_subcommand(
      "oracle", "discrete-population convergence report against the continuum");
  c_oracle->add_option("--x", obs, "observation point");
  c_oracle->add_option("--n", count, "population size of the first row")
      ->check(CLI::PositiveNumber);
  c_oracle->add_option("--doublings", doublings, "number of size doublings")
      ->check(CLI::Range(std::size_t{0}, std::size_t{16}));
  add_scenario(c_oracle);
  add_out(c_oracle);

  CLI::App* c_disc = app.add_subcommand(
      "disc2d", "planar disc cell of the lower-interference BS");
  c_disc->add_option("--p1x", p1x, "BS 1 x coordinate")->required();
  c_disc->add_option("--p1y", p1y, "BS 1 y coordinate");
  c_disc->add_option("--p2x", p2x, "BS 2 x coordinate")->required();
  c_disc->add_option("--p2y", p2y, "BS 2 y coordinate");
  c_disc->add_option("--b", ratio, "interference ratio root in (0, 1)")
      ->required();
  add_out(c_disc);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  sigma_given = c_t1->count("--sigma") > 0;

  try {
    scenario_params p;
    p.half_length = L;
    p.alpha = alpha;
    p.sigma = sigma;

    std::ostringstream buf;
    const auto scenario_args = [&]() {
      return " --L " + fmt_exact(L) + " --alpha " + fmt_exact(alpha) +
             " --sigma " + fmt_exact(sigma);
    };
    bool numerical_failure = false;
    std::string failure_message;

    if (app.got_subcommand(c_cells)) {
      buf << "# args: cells --mode " << mode << " --x1 " << fmt_exact(x1)
          << " --x2 " << fmt_exact(x2) << " --belief " << belief
          << scenario_args() << "\n";
      buf << "mode,x1,x2,cell1,cell2,ratio,tau,center,radius,degenerate,"
             "capture_bs1,capture_bs2\n";
      const utility_mode m = parse_mode(mode);
      std::vector<cell_partition> partitions;
      bool cap1 = false, cap2 = false;
      if (m == utility_mode::sic_single_freq) {
        const sic_equilibria eq = sic_association_single_freq(
            x1, x2, p,
            belief == "optimistic" ? decoding_belief::optimistic
                                   : decoding_belief::pessimistic);
        partitions = eq.partitions;
        cap1 = eq.capture_by_bs1;
        cap2 = eq.capture_by_bs2;
        if (partitions.empty()) partitions.emplace_back();
      } else {
        partitions.push_back(associate(x1, x2, p, m));
      }
      for (const cell_partition& cells : partitions) {
        const boundary_columns b = boundary_of(cells);
        buf << mode << ',' << fmt9(x1) << ',' << fmt9(x2) << ','
            << fmt_intervals(cells.cell1) << ',' << fmt_intervals(cells.cell2)
            << ',' << fmt9(b.ratio) << ',' << fmt9(b.tau) << ','
            << fmt9(b.center) << ',' << fmt9(b.radius) << ','
            << (cells.degenerate ? 1 : 0) << ',' << (cap1 ? 1 : 0) << ','
            << (cap2 ? 1 : 0) << "\n";
      }
    } else if (app.got_subcommand(c_fixed)) {
      buf << "# args: fixed-point --x1 " << fmt_exact(x1) << " --x2 "
          << fmt_exact(x2) << " --tol " << fmt_exact(tol) << scenario_args()
          << "\n";
      buf << "step,ratio,residual,ratio_min,ratio_max,window_min,window_max,"
             "relaxation\n";
      const fixed_point_result res = solve_fixed_point(x1, x2, p, tol);
      for (std::size_t i = 0; i < res.trace.size(); ++i) {
        const double b = res.trace[i];
        buf << i << ',' << fmt9(b) << ','
            << fmt9(std::abs(ratio_map(b, x1, x2, p) - b)) << ','
            << fmt9(res.bracket.ratio_min) << ',' << fmt9(res.bracket.ratio_max)
            << ',' << fmt9(res.bracket.window_min) << ','
            << fmt9(res.bracket.window_max) << ',' << fmt9(res.relaxation)
            << "\n";
      }
    } else if (app.got_subcommand(c_br)) {
      buf << "# args: best-response --which " << which << " --other "
          << fmt_exact(other) << " --mode " << mode << scenario_args() << "\n";
      buf << "which,other,mode,location,value\n";
      const grid_maximum m = best_response(which, other, p, parse_mode(mode));
      for (double loc : m.locations) {
        buf << which << ',' << fmt9(other) << ',' << mode << ',' << fmt9(loc)
            << ',' << fmt9(m.value) << "\n";
      }
    } else if (app.got_subcommand(c_eq)) {
      buf << "# args: equilibrium --kind " << kind << " --mode " << mode
          << (full_search ? " --full-search" : "") << scenario_args() << "\n";
      buf << "kind,mode,x1,x2,utility1,utility2,method,converged\n";
      const utility_mode m = parse_mode(mode);
      const equilibrium_report rep = kind == "cooperative"
                                         ? cooperative_optimum(p, m, full_search)
                                         : symmetric_equilibrium(p, m);
      buf << kind << ',' << mode << ',' << fmt9(rep.placements.x1) << ','
          << fmt9(rep.placements.x2) << ',' << fmt9(rep.utility1) << ','
          << fmt9(rep.utility2) << ',' << method_name(rep.method) << ','
          << (rep.converged ? 1 : 0) << "\n";
    } else if (app.got_subcommand(c_dyn)) {
      buf << "# args: dynamics --x1 " << fmt_exact(x1) << " --x2 "
          << fmt_exact(x2) << " --mode " << mode << " --tol " << fmt_exact(tol)
          << " --max-rounds " << max_rounds << scenario_args() << "\n";
      buf << "round,x1,x2\n";
      const equilibrium_report rep = best_response_dynamics(
          {x1, x2}, p, parse_mode(mode), tol, max_rounds);
      for (std::size_t i = 0; i < rep.trace.size(); ++i) {
        buf << i << ',' << fmt9(rep.trace[i].x1) << ',' << fmt9(rep.trace[i].x2)
            << "\n";
      }
      if (!rep.converged) {
        numerical_failure = true;
        failure_message = "dynamics did not converge within " +
                          std::to_string(max_rounds) + " rounds";
      }
    } else if (app.got_subcommand(c_sweep)) {
      buf << "# args: sweep --which " << which << " --other "
          << fmt_exact(other) << " --mode " << mode << " --quantity "
          << quantity << " --lo " << fmt_exact(lo) << " --hi " << fmt_exact(hi)
          << " --points " << points << scenario_args() << "\n";
      const utility_mode m = parse_mode(mode);
      if (quantity == "utility") {
        buf << "location,value\n";
        for (const sweep_point& pt :
             sweep_utility(which, other, p, m, lo, hi, points)) {
          buf << fmt9(pt.location) << ',' << fmt9(pt.value) << "\n";
        }
      } else {
        if (points < 2) {
          throw std::invalid_argument("sweep: need at least 2 grid points");
        }
        if (!(lo < hi)) {
          throw std::invalid_argument("sweep: empty sweep range");
        }
        buf << "location,count,theta1,theta2\n";
        for (std::size_t i = 0; i < points; ++i) {
          const double own = lo + (hi - lo) * static_cast<double>(i) /
                                      static_cast<double>(points - 1);
          const double a1 = which == 1 ? own : other;
          const double a2 = which == 1 ? other : own;
          const threshold_info t =
              partition_thresholds(associate(a1, a2, p, m), p);
          buf << fmt9(own) << ',' << t.count << ',' << fmt9(t.theta1) << ','
              << fmt9(t.theta2) << "\n";
        }
      }
    } else if (app.got_subcommand(c_t1)) {
      buf << "# args: table1"
          << (sigma_given ? " --sigma " + fmt_exact(sigma) : std::string())
          << " --L " << fmt_exact(L) << " --alpha " << fmt_exact(alpha) << "\n";
      buf << "sigma,cooperative,noncooperative\n";
      std::vector<double> sigmas = {0.1, 0.4, 1.0, 2.0, 40.0};
      if (sigma_given) sigmas = {sigma};
      for (double s : sigmas) {
        scenario_params q = p;
        q.sigma = s;
        const double coop =
            cooperative_optimum(q, utility_mode::cdma_single_freq)
                .placements.x2;
        const double comp =
            symmetric_equilibrium(q, utility_mode::cdma_single_freq)
                .placements.x2;
        buf << fmt9(s) << ',' << fmt9(coop) << ',' << fmt9(comp) << "\n";
      }
    } else if (app.got_subcommand(c_t2)) {
      buf << "# args: table2" << scenario_args() << "\n";
      buf << "x1,x2,ratio_min,ratio_max\n";
      const double rows[][2] = {{15.0, 10.0}, {10.0, 5.0}, {5.0, 10.0},
                                {0.0, 5.0}};
      for (const auto& r : rows) {
        const ratio_bracket rb = bracket_constants(r[0], r[1], p);
        buf << fmt9(r[0]) << ',' << fmt9(r[1]) << ',' << fmt9(rb.ratio_min)
            << ',' << fmt9(rb.ratio_max) << "\n";
      }
    } else if (app.got_subcommand(c_oracle)) {
      buf << "# args: oracle --x " << fmt_exact(obs) << " --n " << count
          << " --doublings " << doublings << scenario_args() << "\n";
      buf << "n,discrete_power,continuum_power,abs_error,ratio_vs_prev\n";
      const double continuum = received_power(obs, interval_set(-L, 0.0), p);
      double prev_err = std::numeric_limits<double>::quiet_NaN();
      for (std::size_t d = 0; d <= doublings; ++d) {
        discrete_population pop;
        pop.count = count << d;
        pop.half_length = L;
        std::vector<std::size_t> left;
        for (std::size_t j = 0; j < pop.count; ++j) {
          if (pop.position(j) < 0.0) left.push_back(j);
        }
        const double approx = discrete_received_power(obs, left, pop, p);
        const double abs_err = std::abs(approx - continuum);
        buf << pop.count << ',' << fmt9(approx) << ',' << fmt9(continuum)
            << ',' << fmt9(abs_err) << ',' << fmt9(prev_err / abs_err) << "\n";
        prev_err = abs_err;
      }
    } else if (app.got_subcommand(c_disc)) {
      buf << "# args: disc2d --p1x " << fmt_exact(p1x) << " --p1y "
          << fmt_exact(p1y) << " --p2x " << fmt_exact(p2x) << " --p2y "
          << fmt_exact(p2y) << " --b " << fmt_exact(ratio) << "\n";
      buf << "p1x,p1y,p2x,p2y,b,center_x,center_y,radius,tau,nonempty\n";
      const disc_cell disc =
          disc_cell_2d({p1x, p1y}, {p2x, p2y}, ratio);
      buf << fmt9(p1x) << ',' << fmt9(p1y) << ',' << fmt9(p2x) << ','
          << fmt9(p2y) << ',' << fmt9(ratio) << ',' << fmt9(disc.center.x)
          << ',' << fmt9(disc.center.y) << ',' << fmt9(disc.radius) << ','
          << fmt9(disc.tau) << ',' << (disc.nonempty ? 1 : 0) << "\n";
    }

    out << buf.str();
    if (!outfile.empty()) {
      std::ofstream f(outfile);
      if (!f) {
        err << "error: cannot open output file: " << outfile << "\n";
        return 2;
      }
      f << buf.str();
    }
    if (numerical_failure) {
      err << "error: " << failure_message << "\n";
      return 3;
    }
    return 0;
  } catch (const numerical_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace linecell_cli
