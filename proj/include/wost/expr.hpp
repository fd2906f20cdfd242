#pragma once

// Implicit scalar fields over R^d as flat expression trees, evaluable three
// ways through one generic walker:
//   eval(Vec)       -> double        exact point evaluation
//   eval(Box)       -> Interval      natural interval extension (inclusion)
//   eval_grad(Box)  -> DualInterval  value + d partial enclosures
//
// Leaves: constants, coordinates, linear forms, RBF sums. Interior ops:
// +, -, *, / (extended), neg, exp, log, sqrt, sqr, abs, min, max,
// smooth-min(k). Primitive builders (sphere, plane, torus, rbf) compose
// these so that each coordinate occurs once per squared term, which keeps
// the natural extension tight on the corpus shapes.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wost/box.hpp"
#include "wost/dual.hpp"
#include "wost/dual2.hpp"
#include "wost/interval.hpp"
#include "wost/vec.hpp"

namespace wost {

enum class Op : uint8_t {
  Constant,
  Coord,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Exp,
  Log,
  Sqrt,
  Sqr,
  Abs,
  Min,
  Max,
  SmoothMin,   // value = blend parameter k
  LinearForm,  // aux -> vparams pair index: w . (p - origin)
  Rbf,         // aux -> rbfs index
};

enum class RbfKernel : uint8_t {
  Gaussian,  // w * exp(-||p-c||^2 / sigma^2)
  Harmonic,  // 3D: w / ||p-c||;  2D: w * log ||p-c||
};

struct RbfData {
  RbfKernel kernel = RbfKernel::Gaussian;
  std::vector<Vec> centers;
  std::vector<double> weights;
  double bandwidth = 1.0;  // gaussian sigma
  double offset = 0.0;
};

struct Node {
  Op op = Op::Constant;
  int32_t a = -1;
  int32_t b = -1;
  double value = 0.0;  // Constant value or SmoothMin k
  int32_t aux = -1;    // Coord axis, LinearForm/Rbf payload index
};

namespace detail {

template <class T>
struct Algebra;

template <>
struct Algebra<double> {
  using In = Vec;
  static double constant(double c, const In&) { return c; }
  static double coord(const In& p, int axis) { return p[axis]; }
  static double add(double a, double b) { return a + b; }
  static double sub(double a, double b) { return a - b; }
  static double mul(double a, double b) { return a * b; }
  static double div(double a, double b) { return a / b; }
  static double neg(double a) { return -a; }
  static double exp_(double a) { return std::exp(a); }
  static double log_(double a) { return std::log(a); }
  static double sqrt_(double a) { return std::sqrt(a); }
  static double sqr_(double a) { return a * a; }
  static double abs_(double a) { return std::abs(a); }
  static double min_(double a, double b) { return std::min(a, b); }
  static double max_(double a, double b) { return std::max(a, b); }
  static double clamp0(double a) { return std::max(a, 0.0); }
};

template <>
struct Algebra<Interval> {
  using In = Box;
  static Interval constant(double c, const In&) { return Interval(c); }
  static Interval coord(const In& b, int axis) { return b.dims[axis]; }
  static Interval add(const Interval& a, const Interval& b) { return a + b; }
  static Interval sub(const Interval& a, const Interval& b) { return a - b; }
  static Interval mul(const Interval& a, const Interval& b) { return a * b; }
  static Interval div(const Interval& a, const Interval& b) { return extended_div(a, b); }
  static Interval neg(const Interval& a) { return -a; }
  static Interval exp_(const Interval& a) { return exp(a); }
  static Interval log_(const Interval& a) { return log(a); }
  static Interval sqrt_(const Interval& a) { return sqrt(a); }
  static Interval sqr_(const Interval& a) { return sqr(a); }
  static Interval abs_(const Interval& a) { return abs(a); }
  static Interval min_(const Interval& a, const Interval& b) { return min(a, b); }
  static Interval max_(const Interval& a, const Interval& b) { return max(a, b); }
  static Interval clamp0(const Interval& a) { return clamp_nonneg(a); }
};

template <>
struct Algebra<DualInterval> {
  using In = Box;
  static DualInterval constant(double c, const In& b) {
    return DualInterval::constant(Interval(c), b.n);
  }
  static DualInterval coord(const In& b, int axis) {
    return DualInterval::variable(b.dims[axis], axis, b.n);
  }
  static DualInterval add(const DualInterval& a, const DualInterval& b) { return a + b; }
  static DualInterval sub(const DualInterval& a, const DualInterval& b) { return a - b; }
  static DualInterval mul(const DualInterval& a, const DualInterval& b) { return a * b; }
  static DualInterval div(const DualInterval& a, const DualInterval& b) { return a / b; }
  static DualInterval neg(const DualInterval& a) { return -a; }
  static DualInterval exp_(const DualInterval& a) { return exp(a); }
  static DualInterval log_(const DualInterval& a) { return log(a); }
  static DualInterval sqrt_(const DualInterval& a) { return sqrt(a); }
  static DualInterval sqr_(const DualInterval& a) { return sqr(a); }
  static DualInterval abs_(const DualInterval& a) { return abs(a); }
  static DualInterval min_(const DualInterval& a, const DualInterval& b) { return min(a, b); }
  static DualInterval max_(const DualInterval& a, const DualInterval& b) { return max(a, b); }
  static DualInterval clamp0(const DualInterval& a) { return clamp_nonneg(a); }
};

template <>
struct Algebra<Dual2> {
  using In = Box;
  static Dual2 constant(double c, const In& b) { return Dual2::constant(Interval(c), b.n); }
  static Dual2 coord(const In& b, int axis) { return Dual2::variable(b.dims[axis], axis, b.n); }
  static Dual2 add(const Dual2& a, const Dual2& b) { return a + b; }
  static Dual2 sub(const Dual2& a, const Dual2& b) { return a - b; }
  static Dual2 mul(const Dual2& a, const Dual2& b) { return a * b; }
  static Dual2 div(const Dual2& a, const Dual2& b) { return a / b; }
  static Dual2 neg(const Dual2& a) { return -a; }
  static Dual2 exp_(const Dual2& a) { return exp(a); }
  static Dual2 log_(const Dual2& a) { return log(a); }
  static Dual2 sqrt_(const Dual2& a) { return sqrt(a); }
  static Dual2 sqr_(const Dual2& a) { return sqr(a); }
  static Dual2 abs_(const Dual2& a) { return abs(a); }
  static Dual2 min_(const Dual2& a, const Dual2& b) { return min(a, b); }
  static Dual2 max_(const Dual2& a, const Dual2& b) { return max(a, b); }
  static Dual2 clamp0(const Dual2& a) { return clamp_nonneg(a); }
};

}  // namespace detail

class ImplicitField {
 public:
  ImplicitField() = default;

  int dimension() const { return dim_; }
  size_t node_count() const { return nodes_.size(); }
  bool valid() const { return !nodes_.empty(); }

  // --- building -----------------------------------------------------------

  static ImplicitField constant(int dim, double c) {
    ImplicitField f(dim);
    f.push({Op::Constant, -1, -1, c, -1});
    return f;
  }

  static ImplicitField coordinate(int dim, int axis) {
    if (axis < 0 || axis >= dim) throw std::invalid_argument("coordinate axis out of range");
    ImplicitField f(dim);
    f.push({Op::Coord, -1, -1, 0.0, axis});
    return f;
  }

  // w . (p - origin)
  static ImplicitField linear_form(const Vec& origin, const Vec& w) {
    ImplicitField f(origin.n);
    f.vparams_.push_back(origin);
    f.vparams_.push_back(w);
    f.push({Op::LinearForm, -1, -1, 0.0, 0});
    return f;
  }

  static ImplicitField rbf(int dim, RbfData data) {
    ImplicitField f(dim);
    f.rbfs_.push_back(std::move(data));
    f.push({Op::Rbf, -1, -1, 0.0, 0});
    return f;
  }

  friend ImplicitField binary(Op op, const ImplicitField& a, const ImplicitField& b, double k);
  friend ImplicitField unary(Op op, const ImplicitField& a);

  // --- evaluation ---------------------------------------------------------

  double eval(const Vec& p) const { return eval_impl<double>(p); }
  Interval eval(const Box& b) const { return eval_impl<Interval>(b); }
  DualInterval eval_grad(const Box& b) const { return eval_impl<DualInterval>(b); }
  Dual2 eval_hess(const Box& b) const { return eval_impl<Dual2>(b); }

  // Point gradient via duals on the degenerate box.
  Vec gradient(const Vec& p) const {
    DualInterval g = eval_grad(Box::degenerate(p));
    Vec r = Vec::zero(p.n);
    for (int i = 0; i < p.n; ++i) r[i] = g.d[i].mid();
    return r;
  }

  const std::vector<RbfData>& rbf_data() const { return rbfs_; }

 private:
  explicit ImplicitField(int dim) : dim_(dim) {}

  void push(Node nd) { nodes_.push_back(nd); }

  // Appends `other`'s nodes, re-indexing children and payload references;
  // returns the index of the appended root.
  int32_t append(const ImplicitField& other) {
    int32_t node_off = static_cast<int32_t>(nodes_.size());
    int32_t vp_off = static_cast<int32_t>(vparams_.size() / 2);  // pair index
    int32_t rbf_off = static_cast<int32_t>(rbfs_.size());
    vparams_.insert(vparams_.end(), other.vparams_.begin(), other.vparams_.end());
    rbfs_.insert(rbfs_.end(), other.rbfs_.begin(), other.rbfs_.end());
    for (Node nd : other.nodes_) {
      if (nd.a >= 0) nd.a += node_off;
      if (nd.b >= 0) nd.b += node_off;
      if (nd.op == Op::LinearForm) nd.aux += vp_off;
      if (nd.op == Op::Rbf) nd.aux += rbf_off;
      nodes_.push_back(nd);
    }
    return static_cast<int32_t>(nodes_.size()) - 1;
  }

  template <class T>
  T eval_impl(const typename detail::Algebra<T>::In& in) const;

  template <class T>
  T eval_rbf(const RbfData& r, const typename detail::Algebra<T>::In& in) const;

  int dim_ = 0;
  std::vector<Node> nodes_;
  std::vector<Vec> vparams_;
  std::vector<RbfData> rbfs_;
};

inline ImplicitField binary(Op op, const ImplicitField& a, const ImplicitField& b, double k = 0.0) {
  if (a.dimension() != b.dimension())
    throw std::invalid_argument("field dimension mismatch");
  ImplicitField f = a;
  int32_t ra = static_cast<int32_t>(f.nodes_.size()) - 1;
  int32_t rb = f.append(b);
  f.push({op, ra, rb, k, -1});
  return f;
}

inline ImplicitField unary(Op op, const ImplicitField& a) {
  ImplicitField f = a;
  int32_t r = static_cast<int32_t>(f.nodes_.size()) - 1;
  f.push({op, r, -1, 0.0, -1});
  return f;
}

inline ImplicitField operator+(const ImplicitField& a, const ImplicitField& b) {
  return binary(Op::Add, a, b);
}
inline ImplicitField operator-(const ImplicitField& a, const ImplicitField& b) {
  return binary(Op::Sub, a, b);
}
inline ImplicitField operator*(const ImplicitField& a, const ImplicitField& b) {
  return binary(Op::Mul, a, b);
}
inline ImplicitField operator/(const ImplicitField& a, const ImplicitField& b) {
  return binary(Op::Div, a, b);
}
inline ImplicitField operator-(const ImplicitField& a) { return unary(Op::Neg, a); }
inline ImplicitField operator+(const ImplicitField& a, double c) {
  return a + ImplicitField::constant(a.dimension(), c);
}
inline ImplicitField operator-(const ImplicitField& a, double c) { return a + (-c); }
inline ImplicitField operator*(double c, const ImplicitField& a) {
  return ImplicitField::constant(a.dimension(), c) * a;
}

inline ImplicitField exp(const ImplicitField& a) { return unary(Op::Exp, a); }
inline ImplicitField log(const ImplicitField& a) { return unary(Op::Log, a); }
inline ImplicitField sqrt(const ImplicitField& a) { return unary(Op::Sqrt, a); }
inline ImplicitField sqr(const ImplicitField& a) { return unary(Op::Sqr, a); }
inline ImplicitField abs(const ImplicitField& a) { return unary(Op::Abs, a); }
inline ImplicitField min(const ImplicitField& a, const ImplicitField& b) {
  return binary(Op::Min, a, b);
}
inline ImplicitField max(const ImplicitField& a, const ImplicitField& b) {
  return binary(Op::Max, a, b);
}

// Polynomial smooth minimum: min(a,b) - (k/4) h^2 with h = max(k-|a-b|,0)/k.
// At a == b it evaluates to the shared value minus k/4.
inline ImplicitField smooth_min(const ImplicitField& a, const ImplicitField& b, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("smooth_min blend k must be positive");
  return binary(Op::SmoothMin, a, b, k);
}

// --- primitive library ------------------------------------------------------

// ||p - c||^2 - R^2 : circle in 2D, sphere in 3D. Negative inside.
inline ImplicitField sphere(const Vec& c, double radius) {
  ImplicitField f = sqr(ImplicitField::coordinate(c.n, 0) - c[0]);
  for (int i = 1; i < c.n; ++i) f = f + sqr(ImplicitField::coordinate(c.n, i) - c[i]);
  return f - radius * radius;
}

// n . p - offset (signed distance when n is unit).
inline ImplicitField plane(const Vec& normal, double offset) {
  return ImplicitField::linear_form(Vec::zero(normal.n), normal) - offset;
}

// Torus around the z axis through `c`: (sqrt(x^2+y^2) - R)^2 + z^2 - r^2.
inline ImplicitField torus(const Vec& c, double major, double minor) {
  if (c.n != 3) throw std::invalid_argument("torus requires dimension 3");
  ImplicitField x = ImplicitField::coordinate(3, 0) - c[0];
  ImplicitField y = ImplicitField::coordinate(3, 1) - c[1];
  ImplicitField z = ImplicitField::coordinate(3, 2) - c[2];
  ImplicitField ring = sqrt(sqr(x) + sqr(y)) - major;
  return sqr(ring) + sqr(z) - minor * minor;
}

// --- generic evaluation ------------------------------------------------------

template <class T>
T ImplicitField::eval_rbf(const RbfData& r, const typename detail::Algebra<T>::In& in) const {
  using A = detail::Algebra<T>;
  T acc = A::constant(r.offset, in);
  for (size_t k = 0; k < r.centers.size(); ++k) {
    const Vec& c = r.centers[k];
    T r2 = A::sqr_(A::sub(A::coord(in, 0), A::constant(c[0], in)));
    for (int i = 1; i < dim_; ++i)
      r2 = A::add(r2, A::sqr_(A::sub(A::coord(in, i), A::constant(c[i], in))));
    T w = A::constant(r.weights[k], in);
    switch (r.kernel) {
      case RbfKernel::Gaussian: {
        T s2 = A::constant(r.bandwidth * r.bandwidth, in);
        acc = A::add(acc, A::mul(w, A::exp_(A::neg(A::div(r2, s2)))));
        break;
      }
      case RbfKernel::Harmonic: {
        if (dim_ == 3) {
          acc = A::add(acc, A::div(w, A::sqrt_(r2)));
        } else {
          // log ||p-c|| = log(r2)/2
          acc = A::add(acc, A::mul(w, A::mul(A::constant(0.5, in), A::log_(r2))));
        }
        break;
      }
    }
  }
  return acc;
}

// Natural extension intersected with the mean-value form
// f(m) + grad f(Y) . (Y - m); second-order tight on smooth fields, and falls
// back to the natural extension when a derivative enclosure is unbounded
// (kinks, poles).
inline Interval tight_eval(const ImplicitField& f, const Box& b) {
  DualInterval g = f.eval_grad(b);
  Interval enc = g.v;
  for (int i = 0; i < b.n; ++i)
    if (!g.d[i].is_finite()) return enc;
  Vec m = b.mid();
  Interval mv = f.eval(Box::degenerate(m));
  for (int i = 0; i < b.n; ++i) mv = mv + g.d[i] * (b.dims[i] - Interval(m[i]));
  Interval tight = intersect(enc, mv);
  return tight.is_empty() ? enc : tight;
}

template <class T>
T ImplicitField::eval_impl(const typename detail::Algebra<T>::In& in) const {
  using A = detail::Algebra<T>;
  static thread_local std::vector<T> vals;
  vals.resize(nodes_.size());
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const Node& nd = nodes_[i];
    switch (nd.op) {
      case Op::Constant:
        vals[i] = A::constant(nd.value, in);
        break;
      case Op::Coord:
        vals[i] = A::coord(in, nd.aux);
        break;
      case Op::Add:
        vals[i] = A::add(vals[nd.a], vals[nd.b]);
        break;
      case Op::Sub:
        vals[i] = A::sub(vals[nd.a], vals[nd.b]);
        break;
      case Op::Mul:
        vals[i] = A::mul(vals[nd.a], vals[nd.b]);
        break;
      case Op::Div:
        vals[i] = A::div(vals[nd.a], vals[nd.b]);
        break;
      case Op::Neg:
        vals[i] = A::neg(vals[nd.a]);
        break;
      case Op::Exp:
        vals[i] = A::exp_(vals[nd.a]);
        break;
      case Op::Log:
        vals[i] = A::log_(vals[nd.a]);
        break;
      case Op::Sqrt:
        vals[i] = A::sqrt_(vals[nd.a]);
        break;
      case Op::Sqr:
        vals[i] = A::sqr_(vals[nd.a]);
        break;
      case Op::Abs:
        vals[i] = A::abs_(vals[nd.a]);
        break;
      case Op::Min:
        vals[i] = A::min_(vals[nd.a], vals[nd.b]);
        break;
      case Op::Max:
        vals[i] = A::max_(vals[nd.a], vals[nd.b]);
        break;
      case Op::SmoothMin: {
        const T& a = vals[nd.a];
        const T& b = vals[nd.b];
        T k = A::constant(nd.value, in);
        T h = A::div(A::clamp0(A::sub(k, A::abs_(A::sub(a, b)))), k);
        T m = A::min_(a, b);
        vals[i] = A::sub(m, A::mul(A::constant(0.25 * nd.value, in), A::sqr_(h)));
        break;
      }
      case Op::LinearForm: {
        const Vec& origin = vparams_[static_cast<size_t>(2 * nd.aux)];
        const Vec& w = vparams_[static_cast<size_t>(2 * nd.aux + 1)];
        T acc = A::constant(0.0, in);
        for (int k = 0; k < dim_; ++k) {
          T diff = A::sub(A::coord(in, k), A::constant(origin[k], in));
          acc = A::add(acc, A::mul(A::constant(w[k], in), diff));
        }
        vals[i] = acc;
        break;
      }
      case Op::Rbf:
        vals[i] = eval_rbf<T>(rbfs_[static_cast<size_t>(nd.aux)], in);
        break;
    }
  }
  return vals.back();
}

}  // namespace wost
