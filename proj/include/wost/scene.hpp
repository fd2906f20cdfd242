#pragma once

// Scene: the implicit boundary geometry of a PDE problem. Boundary fields are
// oriented so that the domain of interest is { f < 0 }; gradients therefore
// point out of the domain on the boundary. The geometric queries themselves
// never rely on the orientation (cos(theta) uses |grad . dir|), only the walk
// stepping and the inside test do.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wost/box.hpp"
#include "wost/expr.hpp"

namespace wost {

struct RobinCoefficientField {
  ImplicitField field;
  bool is_constant = false;
  double constant_value = 0.0;

  double eval(const Vec& p) const { return is_constant ? constant_value : field.eval(p); }
  Interval eval(const Box& b) const {
    return is_constant ? Interval(constant_value) : field.eval(b);
  }
  bool is_zero() const { return is_constant && constant_value == 0.0; }
};

struct Scene {
  int dimension = 2;
  std::optional<ImplicitField> dirichlet_field;  // f_D, zero set = Dirichlet boundary
  std::optional<ImplicitField> robin_field;      // f_R, zero set = reflecting boundary
  std::optional<RobinCoefficientField> mu;       // extended Robin coefficient
  std::optional<ImplicitField> dirichlet_data;   // g, evaluated on the Dirichlet boundary
  std::optional<ImplicitField> robin_data;       // h, right-hand side of the Robin condition
  Box domain_box;
  double epsilon_shell = 1e-3;
  std::string name;

  // All queries run at one tenth of the epsilon-shell.
  double tolerance() const { return epsilon_shell / 10.0; }

  bool has_robin_coefficient() const { return mu.has_value() && !mu->is_zero(); }

  // Inside test for walk starting points / grid nodes: every boundary field
  // negative (absent fields impose nothing).
  bool inside(const Vec& p) const {
    if (dirichlet_field && dirichlet_field->eval(p) >= 0.0) return false;
    if (robin_field && robin_field->eval(p) >= 0.0) return false;
    return domain_box.contains(p);
  }
};

struct SurfaceSample {
  Vec position;
  double field_value = 0.0;
  Vec gradient;
  Vec unit_normal;
};

// Damped Newton projection onto { f = 0 } along the gradient. Falls back to
// bisection along the gradient ray when Newton stalls. Returns nullopt when
// no |f| <= tol point is reached.
inline std::optional<Vec> project_to_surface(const ImplicitField& f, const Vec& seed,
                                             double tol = 1e-12, int max_iter = 20) {
  Vec p = seed;
  double fp = f.eval(p);
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fp) <= tol) return p;
    Vec g = f.gradient(p);
    double g2 = g.norm_sq();
    if (!(g2 > 0.0) || !std::isfinite(g2)) break;
    double step = 1.0;
    for (int halvings = 0; halvings < 12; ++halvings) {
      Vec q = p - (step * fp / g2) * g;
      double fq = f.eval(q);
      if (std::isfinite(fq) && std::abs(fq) < std::abs(fp)) {
        p = q;
        fp = fq;
        break;
      }
      step *= 0.5;
      if (halvings == 11) return std::nullopt;
    }
  }
  if (std::abs(fp) <= tol) return p;

  // Bisect along the gradient direction for a bracketing sign change.
  Vec dir = f.gradient(p).normalized();
  if (!(dir.norm_sq() > 0.0)) return std::nullopt;
  double span = 0.0;
  double fa = fp;
  Vec a = p;
  Vec b = p;
  double step = std::max(1e-6, std::abs(fp));
  for (int k = 0; k < 60; ++k) {
    span = step * std::pow(2.0, k);
    Vec cand = p - (fp > 0 ? 1.0 : -1.0) * span * dir;
    double fc = f.eval(cand);
    if (std::isfinite(fc) && (fc > 0) != (fa > 0)) {
      b = cand;
      break;
    }
    a = cand;
    fa = std::isfinite(fc) ? fc : fa;
    if (k == 59) return std::nullopt;
  }
  double fb = f.eval(b);
  for (int k = 0; k < 200; ++k) {
    Vec m = 0.5 * (a + b);
    double fm = f.eval(m);
    if (std::abs(fm) <= tol) return m;
    if ((fm > 0) == (fb > 0)) {
      b = m;
      fb = fm;
    } else {
      a = m;
    }
  }
  Vec m = 0.5 * (a + b);
  return std::abs(f.eval(m)) <= std::max(tol, 1e-9) ? std::optional<Vec>(m) : std::nullopt;
}

inline SurfaceSample make_surface_sample(const ImplicitField& f, const Vec& p) {
  SurfaceSample s;
  s.position = p;
  s.field_value = f.eval(p);
  s.gradient = f.gradient(p);
  s.unit_normal = s.gradient.normalized();
  return s;
}

struct SceneError : std::runtime_error {
  explicit SceneError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wost
