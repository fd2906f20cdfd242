#pragma once

// Forward-mode dual intervals: an interval value paired with d interval
// partial derivatives, propagated by the chain rule per elementary operation.
// Evaluating a field on the seeds of a box Y yields an enclosure of f(Y)
// together with enclosures of each df/dx_i over Y.
//
// Non-differentiable nodes (abs/min/max) take the hull of both one-sided
// derivatives whenever the argument interval straddles the kink, which keeps
// the gradient enclosure sound on CSG fields.

#include <vector>

#include "wost/box.hpp"
#include "wost/interval.hpp"

namespace wost {

struct DualInterval {
  Interval v;
  std::array<Interval, 3> d{};
  int n = 0;

  DualInterval() = default;

  static DualInterval constant(const Interval& val, int dim) {
    DualInterval r;
    r.v = val;
    r.n = dim;
    for (int i = 0; i < dim; ++i) r.d[i] = Interval(0.0);
    return r;
  }

  // Seed for coordinate `axis`: value is the box interval, partials are the
  // unit basis vector.
  static DualInterval variable(const Interval& val, int axis, int dim) {
    DualInterval r = constant(val, dim);
    r.d[axis] = Interval(1.0);
    return r;
  }

  Interval partial(int i) const { return d[static_cast<size_t>(i)]; }
};

// The d seed duals of a box, identity partial pattern.
inline std::vector<DualInterval> dual_lift(const Box& b) {
  std::vector<DualInterval> seeds;
  seeds.reserve(static_cast<size_t>(b.n));
  for (int i = 0; i < b.n; ++i) seeds.push_back(DualInterval::variable(b.dims[i], i, b.n));
  return seeds;
}

inline DualInterval operator-(const DualInterval& a) {
  DualInterval r = a;
  r.v = -a.v;
  for (int i = 0; i < a.n; ++i) r.d[i] = -a.d[i];
  return r;
}

inline DualInterval operator+(const DualInterval& a, const DualInterval& b) {
  DualInterval r = a;
  r.v = a.v + b.v;
  for (int i = 0; i < a.n; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}

inline DualInterval operator-(const DualInterval& a, const DualInterval& b) {
  DualInterval r = a;
  r.v = a.v - b.v;
  for (int i = 0; i < a.n; ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}

inline DualInterval operator*(const DualInterval& a, const DualInterval& b) {
  DualInterval r = a;
  r.v = a.v * b.v;
  for (int i = 0; i < a.n; ++i) r.d[i] = a.v * b.d[i] + b.v * a.d[i];
  return r;
}

inline DualInterval operator/(const DualInterval& a, const DualInterval& b) {
  DualInterval r = a;
  r.v = extended_div(a.v, b.v);
  Interval b2 = sqr(b.v);
  for (int i = 0; i < a.n; ++i)
    r.d[i] = extended_div(a.d[i] * b.v - a.v * b.d[i], b2);
  return r;
}

inline DualInterval sqr(const DualInterval& a) {
  DualInterval r = a;
  r.v = sqr(a.v);
  Interval two_v = Interval(2.0) * a.v;
  for (int i = 0; i < a.n; ++i) r.d[i] = two_v * a.d[i];
  return r;
}

inline DualInterval exp(const DualInterval& a) {
  DualInterval r = a;
  r.v = exp(a.v);
  for (int i = 0; i < a.n; ++i) r.d[i] = r.v * a.d[i];
  return r;
}

inline DualInterval log(const DualInterval& a) {
  DualInterval r = a;
  r.v = log(a.v);
  for (int i = 0; i < a.n; ++i) r.d[i] = extended_div(a.d[i], a.v);
  return r;
}

inline DualInterval sqrt(const DualInterval& a) {
  DualInterval r = a;
  r.v = sqrt(a.v);
  Interval denom = Interval(2.0) * r.v;
  for (int i = 0; i < a.n; ++i) r.d[i] = extended_div(a.d[i], denom);
  return r;
}

inline DualInterval abs(const DualInterval& a) {
  DualInterval r = a;
  r.v = abs(a.v);
  if (a.v.lo >= 0.0) return r;
  for (int i = 0; i < a.n; ++i)
    r.d[i] = a.v.hi <= 0.0 ? -a.d[i] : hull(a.d[i], -a.d[i]);
  return r;
}

inline DualInterval min(const DualInterval& a, const DualInterval& b) {
  DualInterval r = a;
  r.v = min(a.v, b.v);
  if (a.v.hi <= b.v.lo) return r;  // a is the min everywhere
  if (b.v.hi <= a.v.lo) {
    r.d = b.d;
    return r;
  }
  for (int i = 0; i < a.n; ++i) r.d[i] = hull(a.d[i], b.d[i]);
  return r;
}

inline DualInterval max(const DualInterval& a, const DualInterval& b) {
  DualInterval r = a;
  r.v = max(a.v, b.v);
  if (a.v.lo >= b.v.hi) return r;
  if (b.v.lo >= a.v.hi) {
    r.d = b.d;
    return r;
  }
  for (int i = 0; i < a.n; ++i) r.d[i] = hull(a.d[i], b.d[i]);
  return r;
}

inline DualInterval clamp_nonneg(const DualInterval& a) {
  DualInterval r = a;
  r.v = clamp_nonneg(a.v);
  if (a.v.lo >= 0.0) return r;
  for (int i = 0; i < a.n; ++i)
    r.d[i] = a.v.hi <= 0.0 ? Interval(0.0) : hull(a.d[i], Interval(0.0));
  return r;
}

}  // namespace wost
