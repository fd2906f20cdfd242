#pragma once

// Boxes: Cartesian products of intervals, the search-space atom of the
// branch-and-bound layers.

#include <cassert>
#include <utility>

#include "wost/interval.hpp"
#include "wost/vec.hpp"

namespace wost {

struct Box {
  std::array<Interval, 3> dims{};
  int n = 0;

  Box() = default;
  Box(Interval x, Interval y) : dims{x, y, Interval()}, n(2) {}
  Box(Interval x, Interval y, Interval z) : dims{x, y, z}, n(3) {}

  // Axis-aligned cube of side 2*half centered at c (the "side length 2R"
  // initial boxes of the queries).
  static Box around(const Vec& c, double half) {
    Box b;
    b.n = c.n;
    for (int i = 0; i < c.n; ++i)
      b.dims[i] = Interval(detail::sub_down(c[i], half), detail::add_up(c[i], half));
    return b;
  }

  static Box degenerate(const Vec& p) {
    Box b;
    b.n = p.n;
    for (int i = 0; i < p.n; ++i) b.dims[i] = Interval(p[i]);
    return b;
  }

  int size() const { return n; }
  Interval& operator[](int i) { return dims[static_cast<size_t>(i)]; }
  const Interval& operator[](int i) const { return dims[static_cast<size_t>(i)]; }

  bool is_empty() const {
    for (int i = 0; i < n; ++i)
      if (dims[i].is_empty()) return true;
    return n == 0;
  }

  bool is_finite() const {
    for (int i = 0; i < n; ++i)
      if (!dims[i].is_finite()) return false;
    return true;
  }

  bool contains(const Vec& p) const {
    assert(p.n == n);
    for (int i = 0; i < n; ++i)
      if (!dims[i].contains(p[i])) return false;
    return true;
  }

  double width() const {
    double w = 0.0;
    for (int i = 0; i < n; ++i) w = std::max(w, dims[i].width());
    return w;
  }

  // Axis of maximal width, ties broken toward the lowest index.
  int widest_axis() const {
    int a = 0;
    double w = dims[0].width();
    for (int i = 1; i < n; ++i) {
      if (dims[i].width() > w) {
        w = dims[i].width();
        a = i;
      }
    }
    return a;
  }

  Vec mid() const {
    Vec p = Vec::zero(n);
    for (int i = 0; i < n; ++i) p[i] = dims[i].mid();
    return p;
  }

  double diameter() const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += dims[i].width() * dims[i].width();
    return std::sqrt(s);
  }
};

inline Box intersect(const Box& a, const Box& b) {
  assert(a.n == b.n);
  Box r;
  r.n = a.n;
  for (int i = 0; i < a.n; ++i) r.dims[i] = intersect(a.dims[i], b.dims[i]);
  return r;
}

inline bool subset_of(const Box& a, const Box& b) {
  assert(a.n == b.n);
  for (int i = 0; i < a.n; ++i)
    if (!a.dims[i].subset_of(b.dims[i])) return false;
  return true;
}

// Bisect the widest dimension at its midpoint; the children partition the
// parent. Requires positive finite width.
inline std::pair<Box, Box> subdivide(const Box& b) {
  assert(b.width() > 0.0 && b.is_finite());
  int axis = b.widest_axis();
  const Interval& iv = b.dims[axis];
  double m = iv.mid();
  // Guard against degenerate splits at ulp scale.
  if (!(m > iv.lo) || !(m < iv.hi)) m = std::nextafter(iv.lo, iv.hi);
  Box lo = b, hi = b;
  lo.dims[axis] = Interval(iv.lo, m);
  hi.dims[axis] = Interval(m, iv.hi);
  return {lo, hi};
}

// Encloses { ||z - center||^2 : z in b }.
inline Interval iv_norm_sq(const Box& b, const Vec& center) {
  assert(b.n == center.n);
  Interval s(0.0);
  for (int i = 0; i < b.n; ++i) s = s + sqr(b.dims[i] - Interval(center[i]));
  return s;
}

// Encloses { ||z - center|| : z in b }; lower endpoint 0 iff center in b.
inline Interval iv_norm(const Box& b, const Vec& center) {
  return sqrt(iv_norm_sq(b, center));
}

}  // namespace wost
