#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace linecell {

// Closed interval [lo, hi] on the mobile axis.
struct interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double y) const noexcept { return lo <= y && y <= hi; }
};

inline bool operator==(const interval& a, const interval& b) noexcept {
  return a.lo == b.lo && a.hi == b.hi;
}

// Union of at most two disjoint closed intervals, kept sorted and merged by
// construction. Two intervals are all the association models in this library
// ever produce (a cell is an interval or the complement of one within the
// segment).
//
// Endpoints are treated as closed everywhere; points shared between two
// cells are measure-zero indifference locations, so openness is a purely
// logical distinction that no computation here depends on. Zero-length
// pieces are dropped.
class interval_set {
 public:
  interval_set() = default;

  interval_set(double lo, double hi) { insert(lo, hi); }

  interval_set(std::initializer_list<interval> parts) {
    for (const interval& iv : parts) insert(iv.lo, iv.hi);
  }

  bool empty() const noexcept { return count_ == 0; }
  std::size_t size() const noexcept { return count_; }

  const interval& operator[](std::size_t i) const {
    if (i >= count_) throw std::out_of_range("interval_set: index");
    return parts_[i];
  }

  double measure() const noexcept {
    double total = 0.0;
    for (std::size_t i = 0; i < count_; ++i) total += parts_[i].length();
    return total;
  }

  bool contains(double y) const noexcept {
    for (std::size_t i = 0; i < count_; ++i) {
      if (parts_[i].contains(y)) return true;
    }
    return false;
  }

  // Complement within the closed segment [lo, hi]. Throws if the result
  // would need more than two pieces (never the case for the single-interval
  // sets this library complements).
  interval_set complement_within(double lo, double hi) const {
    if (!(lo <= hi)) {
      throw std::invalid_argument("interval_set: complement segment inverted");
    }
    interval_set out;
    double cursor = lo;
    for (std::size_t i = 0; i < count_; ++i) {
      const interval& iv = parts_[i];
      if (iv.hi < lo || iv.lo > hi) continue;  // outside the segment
      if (iv.lo > cursor) out.insert(cursor, std::min(iv.lo, hi));
      cursor = std::max(cursor, std::min(iv.hi, hi));
    }
    if (cursor < hi) out.insert(cursor, hi);
    return out;
  }

  // Interval endpoints strictly inside (lo, hi): the interior cell
  // boundaries of a partition. Sorted ascending.
  std::vector<double> interior_endpoints(double lo, double hi,
                                         double tol = 1e-12) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < count_; ++i) {
      for (double e : {parts_[i].lo, parts_[i].hi}) {
        if (e > lo + tol && e < hi - tol) out.push_back(e);
      }
    }
    return out;
  }

  friend bool operator==(const interval_set& a,
                         const interval_set& b) noexcept {
    if (a.count_ != b.count_) return false;
    for (std::size_t i = 0; i < a.count_; ++i) {
      if (!(a.parts_[i] == b.parts_[i])) return false;
    }
    return true;
  }

 private:
  void insert(double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
      throw std::invalid_argument("interval_set: malformed interval");
    }
    if (lo == hi) return;  // zero measure
    std::array<interval, 3> merged{};
    std::size_t n = 0;
    bool placed = false;
    interval incoming{lo, hi};
    for (std::size_t i = 0; i < count_; ++i) {
      if (!placed && incoming.lo < parts_[i].lo) {
        merged[n++] = incoming;
        placed = true;
      }
      merged[n++] = parts_[i];
    }
    if (!placed) merged[n++] = incoming;

    std::size_t out = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (merged[i].lo <= merged[out].hi) {
        merged[out].hi = std::max(merged[out].hi, merged[i].hi);
      } else {
        merged[++out] = merged[i];
      }
    }
    n = out + 1;
    if (n > 2) {
      throw std::invalid_argument(
          "interval_set: more than two disjoint intervals");
    }
    count_ = n;
    for (std::size_t i = 0; i < n; ++i) parts_[i] = merged[i];
  }

  std::array<interval, 2> parts_{};
  std::size_t count_ = 0;
};

}  // namespace linecell
