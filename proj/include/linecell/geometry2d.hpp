#pragma once

#include <cmath>
#include <stdexcept>

namespace linecell {

struct point2 {
  double x = 0.0;
  double y = 0.0;
};

// Planar cell of the lower-interference BS (BS 2 by convention): a disc, or
// empty when the interference gap is too small for BS 2 to win anywhere.
// The complement of the disc belongs to BS 1. tau plays the same
// discriminant role as in the 1D partition: the disc is nonempty iff
// tau >= 1 (a single point at exactly 1).
struct disc_cell {
  point2 center;
  double radius = 0.0;
  double tau = 0.0;
  bool nonempty = false;
};

// Planar extension of the indifference locus: with BSs of height 1 above the
// plane at p1 and p2 and a ratio root b in (0,1) favouring BS 2, the set of
// plane points preferring BS 2 satisfies
//   (|q - p2|^2 + 1) <= (|q - p1|^2 + 1) * b^2,
// a disc. b is an input rather than derived: the planar interference model
// (what replaces the segment's total-power integrals) is a modelling choice
// this function deliberately does not make.
inline disc_cell disc_cell_2d(point2 p1, point2 p2, double b) {
  if (b == 1.0) {
    throw std::domain_error(
        "disc_cell_2d: ratio 1 splits the plane at the perpendicular "
        "bisector, not a disc");
  }
  if (!(b > 0.0) || !(b < 1.0)) {
    throw std::invalid_argument(
        "disc_cell_2d: ratio root must lie in (0, 1)");
  }
  if (p1.x == p2.x && p1.y == p2.y) {
    throw std::invalid_argument("disc_cell_2d: coincident base stations");
  }

  const double b2 = b * b;
  const double lead = 1.0 - b2;
  disc_cell out;
  out.tau = std::hypot(p1.x - p2.x, p1.y - p2.y) * b / lead;
  out.center = point2{(p2.x - p1.x * b2) / lead, (p2.y - p1.y * b2) / lead};
  if (out.tau >= 1.0) {
    out.nonempty = true;
    out.radius = std::sqrt(out.tau * out.tau - 1.0);
  }
  return out;
}

}  // namespace linecell
