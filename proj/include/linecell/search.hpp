#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace linecell {

// Result of a one-dimensional maximization. `locations` holds every maximizer
// whose value ties the best within relative 1e-9 (discontinuous objectives
// and symmetric ones genuinely have several), sorted ascending.
struct grid_maximum {
  std::vector<double> locations;
  double value = 0.0;
};

namespace detail {

// Golden-section maximization on [lo, hi]; returns the abscissa of the
// maximum of a locally unimodal function to within xtol.
template <class F>
double golden_max(F&& f, double lo, double hi, double xtol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Dense grid scan over [lo, hi] followed by golden-section refinement around
// every local grid maximum. The scan step is needed because the objectives
// here can jump (association boundaries crossing a placement), so a single
// unimodal refinement would be unsound.
template <class F>
grid_maximum maximize_on_grid(F&& f, double lo, double hi, std::size_t n,
                              double xtol = 1e-6) {
  if (n < 2) throw std::invalid_argument("maximize_on_grid: need >= 2 points");
  std::vector<double> xs(n), vs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    vs[i] = f(xs[i]);
  }

  std::vector<double> cand_x;
  std::vector<double> cand_v;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || vs[i] >= vs[i - 1];
    const bool right_ok = i + 1 == n || vs[i] >= vs[i + 1];
    if (!(left_ok && right_ok)) continue;
    const double a = i == 0 ? xs[0] : xs[i - 1];
    const double b = i + 1 == n ? xs[n - 1] : xs[i + 1];
    double x = a < b ? golden_max(f, a, b, xtol) : xs[i];
    double v = f(x);
    if (vs[i] > v) {  // refinement worsened things (jump inside bracket)
      x = xs[i];
      v = vs[i];
    }
    cand_x.push_back(x);
    cand_v.push_back(v);
  }

  grid_maximum out;
  out.value = cand_v[0];
  for (double v : cand_v) out.value = std::max(out.value, v);
  const double tie = 1e-9 * std::max(1.0, std::abs(out.value));
  for (std::size_t i = 0; i < cand_x.size(); ++i) {
    if (cand_v[i] >= out.value - tie) out.locations.push_back(cand_x[i]);
  }
  std::sort(out.locations.begin(), out.locations.end());
  // Collapse refinements that converged to the same point from both sides.
  std::vector<double> unique;
  for (double x : out.locations) {
    if (unique.empty() || x - unique.back() > 10.0 * xtol) unique.push_back(x);
  }
  out.locations = std::move(unique);
  return out;
}

// Bisection for a root of a continuous function with f(lo), f(hi) of
// opposite (or zero) sign.
template <class F>
double bisect_root(F&& f, double lo, double hi, double xtol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::invalid_argument("bisect_root: no sign change on interval");
  }
  while (hi - lo > xtol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail
}  // namespace linecell
