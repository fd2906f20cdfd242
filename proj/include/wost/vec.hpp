#pragma once

// Small runtime-dimension point/vector type (d = 2 or 3). Scenes decide the
// dimension at parse time, so a fixed-capacity array with a runtime size is
// the simplest fit.

#include <array>
#include <cassert>
#include <cmath>

namespace wost {

struct Vec {
  std::array<double, 3> c{0.0, 0.0, 0.0};
  int n = 0;

  Vec() = default;
  Vec(double x, double y) : c{x, y, 0.0}, n(2) {}
  Vec(double x, double y, double z) : c{x, y, z}, n(3) {}

  static Vec zero(int dim) {
    Vec v;
    v.n = dim;
    return v;
  }

  int size() const { return n; }
  double& operator[](int i) { return c[static_cast<size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<size_t>(i)]; }

  double dot(const Vec& o) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += c[i] * o.c[i];
    return s;
  }
  double norm_sq() const { return dot(*this); }
  double norm() const { return std::sqrt(norm_sq()); }

  Vec normalized() const {
    double m = norm();
    Vec r = *this;
    if (m > 0.0) {
      for (int i = 0; i < n; ++i) r.c[i] /= m;
    }
    return r;
  }
};

inline Vec operator+(const Vec& a, const Vec& b) {
  assert(a.n == b.n);
  Vec r = a;
  for (int i = 0; i < a.n; ++i) r.c[i] += b.c[i];
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  assert(a.n == b.n);
  Vec r = a;
  for (int i = 0; i < a.n; ++i) r.c[i] -= b.c[i];
  return r;
}

inline Vec operator*(double s, const Vec& a) {
  Vec r = a;
  for (int i = 0; i < a.n; ++i) r.c[i] *= s;
  return r;
}

inline Vec operator*(const Vec& a, double s) { return s * a; }

inline Vec operator-(const Vec& a) { return -1.0 * a; }

inline bool operator==(const Vec& a, const Vec& b) {
  if (a.n != b.n) return false;
  for (int i = 0; i < a.n; ++i)
    if (a.c[i] != b.c[i]) return false;
  return true;
}

inline double distance(const Vec& a, const Vec& b) { return (a - b).norm(); }

}  // namespace wost
