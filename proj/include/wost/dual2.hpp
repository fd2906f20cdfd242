#pragma once

// Second-order forward duals: interval value, gradient enclosure, and
// Hessian enclosure, propagated per elementary operation. These feed the
// mean-value forms used to tighten constraint and objective inclusion
// functions: a first-order enclosure of a derivative makes the enclosure of
// the function second-order accurate in the box width.
//
// Kinked nodes (abs/min/max at straddling arguments) return whole-line
// Hessian entries; callers of mean-value forms treat a non-finite derivative
// enclosure as "fall back to the natural extension".

#include "wost/box.hpp"
#include "wost/interval.hpp"

namespace wost {

// Symmetric Hessian storage for d <= 3: (0,0)(0,1)(0,2)(1,1)(1,2)(2,2).
inline constexpr int hess_index(int i, int j) {
  if (i > j) std::swap(i, j);
  return i == 0 ? j : (i == 1 ? 2 + j : 5);
}

struct Dual2 {
  Interval v;
  std::array<Interval, 3> d{};
  std::array<Interval, 6> h{};
  int n = 0;

  static Dual2 constant(const Interval& val, int dim) {
    Dual2 r;
    r.v = val;
    r.n = dim;
    return r;
  }

  static Dual2 variable(const Interval& val, int axis, int dim) {
    Dual2 r = constant(val, dim);
    r.d[axis] = Interval(1.0);
    return r;
  }

  Interval hess(int i, int j) const { return h[hess_index(i, j)]; }

  bool derivatives_finite() const {
    for (int i = 0; i < n; ++i)
      if (!d[i].is_finite()) return false;
    return true;
  }
};

namespace detail {
inline int hess_count(int n) { return n == 2 ? 3 : 6; }
}

inline Dual2 operator-(const Dual2& a) {
  Dual2 r = a;
  r.v = -a.v;
  for (int i = 0; i < a.n; ++i) r.d[i] = -a.d[i];
  for (int k = 0; k < detail::hess_count(a.n); ++k) r.h[k] = -a.h[k];
  return r;
}

inline Dual2 operator+(const Dual2& a, const Dual2& b) {
  Dual2 r = a;
  r.v = a.v + b.v;
  for (int i = 0; i < a.n; ++i) r.d[i] = a.d[i] + b.d[i];
  for (int k = 0; k < detail::hess_count(a.n); ++k) r.h[k] = a.h[k] + b.h[k];
  return r;
}

inline Dual2 operator-(const Dual2& a, const Dual2& b) {
  Dual2 r = a;
  r.v = a.v - b.v;
  for (int i = 0; i < a.n; ++i) r.d[i] = a.d[i] - b.d[i];
  for (int k = 0; k < detail::hess_count(a.n); ++k) r.h[k] = a.h[k] - b.h[k];
  return r;
}

inline Dual2 operator*(const Dual2& a, const Dual2& b) {
  Dual2 r = a;
  r.v = a.v * b.v;
  for (int i = 0; i < a.n; ++i) r.d[i] = a.v * b.d[i] + b.v * a.d[i];
  for (int i = 0; i < a.n; ++i)
    for (int j = i; j < a.n; ++j) {
      int k = hess_index(i, j);
      r.h[k] = a.v * b.h[k] + b.v * a.h[k] + a.d[i] * b.d[j] + a.d[j] * b.d[i];
    }
  return r;
}

inline Dual2 sqr(const Dual2& a) {
  Dual2 r = a;
  r.v = sqr(a.v);
  Interval two_v = Interval(2.0) * a.v;
  for (int i = 0; i < a.n; ++i) r.d[i] = two_v * a.d[i];
  for (int i = 0; i < a.n; ++i)
    for (int j = i; j < a.n; ++j) {
      int k = hess_index(i, j);
      r.h[k] = Interval(2.0) * (a.d[i] * a.d[j] + a.v * a.h[k]);
    }
  return r;
}

inline Dual2 inverse(const Dual2& b) {
  Dual2 r = b;
  Interval v2 = sqr(b.v);
  Interval v3 = v2 * b.v;
  r.v = extended_div(Interval(1.0), b.v);
  for (int i = 0; i < b.n; ++i) r.d[i] = -extended_div(b.d[i], v2);
  for (int i = 0; i < b.n; ++i)
    for (int j = i; j < b.n; ++j) {
      int k = hess_index(i, j);
      r.h[k] = -extended_div(b.h[k], v2) +
               Interval(2.0) * extended_div(b.d[i] * b.d[j], v3);
    }
  return r;
}

inline Dual2 operator/(const Dual2& a, const Dual2& b) { return a * inverse(b); }

inline Dual2 exp(const Dual2& a) {
  Dual2 r = a;
  Interval E = exp(a.v);
  r.v = E;
  for (int i = 0; i < a.n; ++i) r.d[i] = E * a.d[i];
  for (int i = 0; i < a.n; ++i)
    for (int j = i; j < a.n; ++j) {
      int k = hess_index(i, j);
      r.h[k] = E * (a.h[k] + a.d[i] * a.d[j]);
    }
  return r;
}

inline Dual2 log(const Dual2& a) {
  Dual2 r = a;
  r.v = log(a.v);
  Interval v2 = sqr(a.v);
  for (int i = 0; i < a.n; ++i) r.d[i] = extended_div(a.d[i], a.v);
  for (int i = 0; i < a.n; ++i)
    for (int j = i; j < a.n; ++j) {
      int k = hess_index(i, j);
      r.h[k] = extended_div(a.h[k], a.v) - extended_div(a.d[i] * a.d[j], v2);
    }
  return r;
}

inline Dual2 sqrt(const Dual2& a) {
  Dual2 r = a;
  Interval s = sqrt(a.v);
  r.v = s;
  Interval two_s = Interval(2.0) * s;
  Interval four_vs = Interval(4.0) * a.v * s;
  for (int i = 0; i < a.n; ++i) r.d[i] = extended_div(a.d[i], two_s);
  for (int i = 0; i < a.n; ++i)
    for (int j = i; j < a.n; ++j) {
      int k = hess_index(i, j);
      r.h[k] = extended_div(a.h[k], two_s) - extended_div(a.d[i] * a.d[j], four_vs);
    }
  return r;
}

namespace detail {
inline void kink_second_order(Dual2& r) {
  for (int k = 0; k < hess_count(r.n); ++k) r.h[k] = Interval::whole();
}
}  // namespace detail

inline Dual2 abs(const Dual2& a) {
  Dual2 r = a;
  r.v = abs(a.v);
  if (a.v.lo >= 0.0) return r;
  if (a.v.hi <= 0.0) {
    for (int i = 0; i < a.n; ++i) r.d[i] = -a.d[i];
    for (int k = 0; k < detail::hess_count(a.n); ++k) r.h[k] = -a.h[k];
    return r;
  }
  for (int i = 0; i < a.n; ++i) r.d[i] = hull(a.d[i], -a.d[i]);
  detail::kink_second_order(r);
  return r;
}

inline Dual2 min(const Dual2& a, const Dual2& b) {
  if (a.v.hi <= b.v.lo) {
    Dual2 r = a;
    r.v = min(a.v, b.v);
    return r;
  }
  if (b.v.hi <= a.v.lo) {
    Dual2 r = b;
    r.v = min(a.v, b.v);
    return r;
  }
  Dual2 r = a;
  r.v = min(a.v, b.v);
  for (int i = 0; i < a.n; ++i) r.d[i] = hull(a.d[i], b.d[i]);
  detail::kink_second_order(r);
  return r;
}

inline Dual2 max(const Dual2& a, const Dual2& b) {
  if (a.v.lo >= b.v.hi) {
    Dual2 r = a;
    r.v = max(a.v, b.v);
    return r;
  }
  if (b.v.lo >= a.v.hi) {
    Dual2 r = b;
    r.v = max(a.v, b.v);
    return r;
  }
  Dual2 r = a;
  r.v = max(a.v, b.v);
  for (int i = 0; i < a.n; ++i) r.d[i] = hull(a.d[i], b.d[i]);
  detail::kink_second_order(r);
  return r;
}

inline Dual2 clamp_nonneg(const Dual2& a) {
  Dual2 r = a;
  r.v = clamp_nonneg(a.v);
  if (a.v.lo >= 0.0) return r;
  if (a.v.hi <= 0.0) {
    for (int i = 0; i < a.n; ++i) r.d[i] = Interval(0.0);
    for (int k = 0; k < detail::hess_count(a.n); ++k) r.h[k] = Interval(0.0);
    return r;
  }
  for (int i = 0; i < a.n; ++i) r.d[i] = hull(a.d[i], Interval(0.0));
  detail::kink_second_order(r);
  return r;
}

}  // namespace wost
