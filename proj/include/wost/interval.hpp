#pragma once

// Closed real intervals [lo, hi] with outward-rounded endpoints and native
// +/-inf support. Every operation returns an interval that encloses the exact
// real image of its operands; that inclusion property is what all pruning in
// the branch-and-bound layers relies on.
//
// Rounding policy: endpoint results carry an exact error term where one is
// available (TwoSum for +/-, fma for *, / and sqrt), so exactly representable
// results are not widened; otherwise the endpoint is stepped one ulp outward.
// exp/log assume the libm result is within 1 ulp (glibc is correctly rounded
// for both) and always step outward.

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>

namespace wost {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {

inline constexpr double kDblMax = std::numeric_limits<double>::max();
inline constexpr double kNormMin = std::numeric_limits<double>::min();

// nextafter for finite values by ULP stepping (branchier libm calls dominate
// the interval hot path otherwise); infinities pass through.
inline double step_down(double v) {
  if (!std::isfinite(v)) return v;
  if (v == 0.0) return -std::numeric_limits<double>::denorm_min();
  uint64_t bits = std::bit_cast<uint64_t>(v);
  bits += (v > 0.0) ? -1ull : 1ull;
  return std::bit_cast<double>(bits);
}

inline double step_up(double v) {
  if (!std::isfinite(v)) return v;
  if (v == 0.0) return std::numeric_limits<double>::denorm_min();
  uint64_t bits = std::bit_cast<uint64_t>(v);
  bits += (v > 0.0) ? 1ull : -1ull;
  return std::bit_cast<double>(bits);
}

// a + b rounded toward -inf. TwoSum gives the exact rounding error, so exact
// sums stay exact. Overflow to +inf is pulled back to DBL_MAX (which is still
// a valid lower bound for a finite true sum).
inline double add_down(double a, double b) {
  double s = a + b;
  if (std::isnan(s)) return s;
  if (s == kInf) return (std::isfinite(a) && std::isfinite(b)) ? kDblMax : s;
  if (s == -kInf) return s;
  if (!std::isfinite(a) || !std::isfinite(b)) return s;
  double bp = s - a;
  double e = (a - (s - bp)) + (b - bp);
  return e < 0.0 ? step_down(s) : s;
}

inline double add_up(double a, double b) {
  double s = a + b;
  if (std::isnan(s)) return s;
  if (s == -kInf) return (std::isfinite(a) && std::isfinite(b)) ? -kDblMax : s;
  if (s == kInf) return s;
  if (!std::isfinite(a) || !std::isfinite(b)) return s;
  double bp = s - a;
  double e = (a - (s - bp)) + (b - bp);
  return e > 0.0 ? step_up(s) : s;
}

inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

// Endpoint product with the closed-interval convention 0 * inf = 0.
inline double mul_down(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = a * b;
  if (std::isnan(p)) return p;
  if (p == kInf) return (std::isfinite(a) && std::isfinite(b)) ? kDblMax : p;
  if (p == -kInf) return p;
  if (!std::isfinite(a) || !std::isfinite(b)) return p;
  if (std::abs(p) < kNormMin) return step_down(p);
  double e = std::fma(a, b, -p);
  return e < 0.0 ? step_down(p) : p;
}

inline double mul_up(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = a * b;
  if (std::isnan(p)) return p;
  if (p == -kInf) return (std::isfinite(a) && std::isfinite(b)) ? -kDblMax : p;
  if (p == kInf) return p;
  if (!std::isfinite(a) || !std::isfinite(b)) return p;
  if (std::abs(p) < kNormMin) return step_up(p);
  double e = std::fma(a, b, -p);
  return e > 0.0 ? step_up(p) : p;
}

// a / b for b != 0. finite/inf collapses to 0 (the closed hull endpoint).
inline double div_down(double a, double b) {
  if (a == 0.0) return 0.0;
  if (std::isinf(b)) return std::isinf(a) ? std::numeric_limits<double>::quiet_NaN() : 0.0;
  if (std::isinf(a)) return ((a > 0.0) == (b > 0.0)) ? kInf : -kInf;
  double q = a / b;
  if (std::isnan(q)) return q;
  if (q == kInf) return kDblMax;
  if (q == -kInf) return q;
  if (std::abs(q) < kNormMin) return step_down(q);
  double r = std::fma(q, b, -a);  // exact residual q*b - a; true = q - r/b
  bool correction_negative = (r != 0.0) && ((r > 0.0) == (b > 0.0));
  return correction_negative ? step_down(q) : q;
}

inline double div_up(double a, double b) {
  if (a == 0.0) return 0.0;
  if (std::isinf(b)) return std::isinf(a) ? std::numeric_limits<double>::quiet_NaN() : 0.0;
  if (std::isinf(a)) return ((a > 0.0) == (b > 0.0)) ? kInf : -kInf;
  double q = a / b;
  if (std::isnan(q)) return q;
  if (q == -kInf) return -kDblMax;
  if (q == kInf) return q;
  if (std::abs(q) < kNormMin) return step_up(q);
  double r = std::fma(q, b, -a);
  bool correction_positive = (r != 0.0) && ((r > 0.0) != (b > 0.0));
  return correction_positive ? step_up(q) : q;
}

// sqrt is correctly rounded by IEEE 754, so the fma residual decides exactly.
inline double sqrt_down(double x) {
  double r = std::sqrt(x);
  if (r == 0.0 || !std::isfinite(r)) return r;
  return std::fma(r, r, -x) > 0.0 ? step_down(r) : r;
}

inline double sqrt_up(double x) {
  double r = std::sqrt(x);
  if (!std::isfinite(r)) return r;
  if (r == 0.0) return x > 0.0 ? kNormMin : 0.0;
  return std::fma(r, r, -x) < 0.0 ? step_up(r) : r;
}

inline double exp_down(double x) {
  if (x == -kInf) return 0.0;
  if (x == kInf) return kInf;
  double r = std::exp(x);
  if (r == kInf) return kDblMax;
  return r == 0.0 ? 0.0 : step_down(r);
}

inline double exp_up(double x) {
  if (x == -kInf) return 0.0;
  double r = std::exp(x);
  return std::isfinite(r) ? step_up(r) : r;
}

inline double log_down(double x) {  // pre: x > 0
  if (x == kInf) return kInf;
  double r = std::log(x);
  return std::isfinite(r) ? step_down(r) : r;
}

inline double log_up(double x) {
  if (x == kInf) return kInf;
  double r = std::log(x);
  return std::isfinite(r) ? step_up(r) : r;
}

}  // namespace detail

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double x) : lo(x), hi(x) {}
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  static constexpr Interval empty() { return Interval(kInf, -kInf); }
  static constexpr Interval whole() { return Interval(-kInf, kInf); }

  bool is_empty() const { return !(lo <= hi); }
  bool is_degenerate() const { return lo == hi; }
  bool is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
  bool subset_of(const Interval& o) const {
    return is_empty() || (o.lo <= lo && hi <= o.hi);
  }

  double width() const { return is_empty() ? 0.0 : hi - lo; }
  double mid() const {
    if (is_empty()) return std::numeric_limits<double>::quiet_NaN();
    if (lo == -kInf && hi == kInf) return 0.0;
    if (lo == -kInf) return -detail::kDblMax;
    if (hi == kInf) return detail::kDblMax;
    return 0.5 * lo + 0.5 * hi;
  }
};

inline Interval operator-(const Interval& a) {
  if (a.is_empty()) return Interval::empty();
  return {-a.hi, -a.lo};
}

inline Interval operator+(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  return {detail::add_down(a.lo, b.lo), detail::add_up(a.hi, b.hi)};
}

inline Interval operator-(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  return {detail::sub_down(a.lo, b.hi), detail::sub_up(a.hi, b.lo)};
}

inline Interval operator*(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  using namespace detail;
  double lo = std::min(std::min(mul_down(a.lo, b.lo), mul_down(a.lo, b.hi)),
                       std::min(mul_down(a.hi, b.lo), mul_down(a.hi, b.hi)));
  double hi = std::max(std::max(mul_up(a.lo, b.lo), mul_up(a.lo, b.hi)),
                       std::max(mul_up(a.hi, b.lo), mul_up(a.hi, b.hi)));
  return {lo, hi};
}

inline Interval operator+(const Interval& a, double b) { return a + Interval(b); }
inline Interval operator+(double a, const Interval& b) { return Interval(a) + b; }
inline Interval operator-(const Interval& a, double b) { return a - Interval(b); }
inline Interval operator-(double a, const Interval& b) { return Interval(a) - b; }
inline Interval operator*(const Interval& a, double b) { return a * Interval(b); }
inline Interval operator*(double a, const Interval& b) { return Interval(a) * b; }

// Extended division. Division by an interval containing 0 follows the
// convention that a positive numerator yields +inf (and symmetrically); the
// 0/0 hull is the whole extended line. [c,c>0]/[0,0] = [+inf,+inf], which
// downstream minimization treats as "no finite value on this box".
inline Interval extended_div(const Interval& a, const Interval& b) {
  using namespace detail;
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  if (b.lo > 0.0 || b.hi < 0.0) {
    double lo = std::min(std::min(div_down(a.lo, b.lo), div_down(a.lo, b.hi)),
                         std::min(div_down(a.hi, b.lo), div_down(a.hi, b.hi)));
    double hi = std::max(std::max(div_up(a.lo, b.lo), div_up(a.lo, b.hi)),
                         std::max(div_up(a.hi, b.lo), div_up(a.hi, b.hi)));
    return {lo, hi};
  }
  if (b.lo == 0.0 && b.hi == 0.0) {
    if (a.lo > 0.0) return {kInf, kInf};
    if (a.hi < 0.0) return {-kInf, -kInf};
    return Interval::whole();
  }
  if (a.lo > 0.0) {
    if (b.lo == 0.0) return {div_down(a.lo, b.hi), kInf};
    if (b.hi == 0.0) return {-kInf, div_up(a.lo, b.lo)};
    return Interval::whole();
  }
  if (a.hi < 0.0) {
    if (b.lo == 0.0) return {-kInf, div_up(a.hi, b.hi)};
    if (b.hi == 0.0) return {div_down(a.hi, b.lo), kInf};
    return Interval::whole();
  }
  return Interval::whole();  // 0 in both
}

inline Interval operator/(const Interval& a, const Interval& b) { return extended_div(a, b); }
inline Interval operator/(const Interval& a, double b) { return extended_div(a, Interval(b)); }
inline Interval operator/(double a, const Interval& b) { return extended_div(Interval(a), b); }

inline Interval sqr(const Interval& a) {
  using namespace detail;
  if (a.is_empty()) return Interval::empty();
  if (a.lo >= 0.0) return {mul_down(a.lo, a.lo), mul_up(a.hi, a.hi)};
  if (a.hi <= 0.0) return {mul_down(a.hi, a.hi), mul_up(a.lo, a.lo)};
  return {0.0, std::max(mul_up(a.lo, a.lo), mul_up(a.hi, a.hi))};
}

// sqrt clips the negative part; see sqrt_clipped when the caller needs to
// know whether clipping happened. Fully negative input yields empty.
inline Interval sqrt(const Interval& a) {
  if (a.is_empty() || a.hi < 0.0) return Interval::empty();
  return {detail::sqrt_down(std::max(a.lo, 0.0)), detail::sqrt_up(a.hi)};
}

inline Interval sqrt_clipped(const Interval& a, bool& clipped) {
  clipped = !a.is_empty() && a.lo < 0.0;
  return sqrt(a);
}

inline Interval exp(const Interval& a) {
  if (a.is_empty()) return Interval::empty();
  return {detail::exp_down(a.lo), detail::exp_up(a.hi)};
}

// log over the positive part of a; lower endpoint -inf when a touches 0.
inline Interval log(const Interval& a) {
  if (a.is_empty() || a.hi <= 0.0) return Interval::empty();
  double lo = a.lo <= 0.0 ? -kInf : detail::log_down(a.lo);
  return {lo, detail::log_up(a.hi)};
}

inline Interval abs(const Interval& a) {
  if (a.is_empty()) return Interval::empty();
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return {-a.hi, -a.lo};
  return {0.0, std::max(-a.lo, a.hi)};
}

// Pointwise max with 0: [-1,2] -> [0,2], [-3,-1] -> [0,0].
inline Interval clamp_nonneg(const Interval& a) {
  if (a.is_empty()) return Interval::empty();
  return {std::max(a.lo, 0.0), std::max(a.hi, 0.0)};
}

inline Interval min(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}

inline Interval max(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Interval hull(const Interval& a, const Interval& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Interval intersect(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  return r.is_empty() ? Interval::empty() : r;
}

// Clamp the interval into [0,1]; used for cos(theta) enclosures, whose raw
// box evaluation can transiently exceed 1.
inline Interval clamp_unit(const Interval& a) {
  if (a.is_empty()) return Interval::empty();
  return {std::clamp(a.lo, 0.0, 1.0), std::clamp(a.hi, 0.0, 1.0)};
}

inline bool operator==(const Interval& a, const Interval& b) {
  return (a.is_empty() && b.is_empty()) || (a.lo == b.lo && a.hi == b.hi);
}

}  // namespace wost
