#pragma once

// The five walk-on-stars geometric queries on closed implicit surfaces, each
// phrased as constrained global optimization (closest point, ray, closest
// silhouette, Robin radius bound) or constraint satisfaction (boundary
// sampling) and solved by the interval branch-and-bound engine.
//
// All searches are clipped to the scene's domain box: boundary zero sets are
// required to lie inside it, and the clip keeps harmonic RBF poles (which the
// parser forces outside the box) out of every search region.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "wost/box.hpp"
#include "wost/expr.hpp"
#include "wost/opt.hpp"
#include "wost/reservoir.hpp"
#include "wost/rng.hpp"
#include "wost/scene.hpp"

namespace wost {

struct QueryConfig {
  double tolerance = 1e-4;  // box acceptance width; also the surface tolerance
  uint64_t max_boxes = 1'000'000;
  double shrink_factor = 1e-3;  // relative part of the silhouette shrink
  double r_min = 0.0;           // minimum step radius (walk-level clamp)
  TraceFn trace;

  static QueryConfig for_scene(const Scene& scene) {
    QueryConfig cfg;
    cfg.tolerance = scene.tolerance();
    return cfg;
  }
};

namespace detail {

// Upper bounds fed back into the search come from points projected onto the
// constraint set to ~1e-12 residual; pad the value so it stays a true upper
// bound of the constrained minimum.
inline double padded(double v) { return v + 1e-10 * (1.0 + std::abs(v)); }

// Stop once the distance enclosure (the sqrt of the objective) is tight.
inline std::function<bool(double, double)> sqrt_gap_stop(double tol) {
  return [tol](double lb, double ub) {
    return std::sqrt(std::max(ub, 0.0)) - std::sqrt(std::max(lb, 0.0)) <= 2.0 * tol;
  };
}

// Enclosure of grad f(Y) . (Y - x), the silhouette functional. The natural
// assembly is intersected with a mean-value form whose derivative enclosures
// come from the field's Hessian duals; near-silhouette bands then thin out
// quadratically instead of linearly with the box width.
inline Interval dot_grad_offset(const ImplicitField& f, const Box& b, const Vec& x) {
  Dual2 F = f.eval_hess(b);
  Interval dot(0.0);
  for (int i = 0; i < b.n; ++i) dot = dot + F.d[i] * (b.dims[i] - Interval(x[i]));
  bool finite = true;
  for (int i = 0; i < b.n && finite; ++i) {
    if (!F.d[i].is_finite()) finite = false;
    for (int j = i; j < b.n && finite; ++j)
      if (!F.hess(i, j).is_finite()) finite = false;
  }
  if (!finite || !(b.width() > 0.0)) return dot;
  Vec m = b.mid();
  DualInterval gm = f.eval_grad(Box::degenerate(m));
  Interval dot_mid(0.0);
  for (int i = 0; i < b.n; ++i) dot_mid = dot_mid + gm.d[i] * Interval(m[i] - x[i]);
  Interval mv = dot_mid;
  for (int i = 0; i < b.n; ++i) {
    // d/dz_i [grad f . (z-x)] = sum_j H_ij (z_j - x_j) + g_i
    Interval deriv = F.d[i];
    for (int j = 0; j < b.n; ++j)
      deriv = deriv + F.hess(i, j) * (b.dims[j] - Interval(x[j]));
    mv = mv + deriv * (b.dims[i] - Interval(m[i]));
  }
  Interval tight = intersect(dot, mv);
  return tight.is_empty() ? dot : tight;
}

// Gauss-Newton projection onto the silhouette system { f(z) = 0,
// grad f(z) . (z - x) = 0 } (minimal-norm step; second Jacobian row by
// central differences since the tree carries no second derivatives).
inline std::optional<Vec> project_to_silhouette(const ImplicitField& f, const Vec& x, Vec z,
                                                double tol = 1e-10, int max_iter = 40) {
  const int d = z.n;
  auto silhouette_residual = [&](const Vec& p) { return f.gradient(p).dot(p - x); };
  double prev_norm = kInf;
  for (int it = 0; it < max_iter; ++it) {
    double r1 = f.eval(z);
    Vec g = f.gradient(z);
    double r2 = g.dot(z - x);
    double scale = 1.0 + (z - x).norm();
    if (std::abs(r1) <= tol && std::abs(r2) <= tol * scale) return z;
    Vec row2 = Vec::zero(d);
    const double h = 1e-6;
    for (int i = 0; i < d; ++i) {
      Vec zp = z, zm = z;
      zp[i] += h;
      zm[i] -= h;
      row2[i] = (silhouette_residual(zp) - silhouette_residual(zm)) / (2 * h);
    }
    double a = g.dot(g), b = g.dot(row2), c = row2.dot(row2);
    double det = a * c - b * b;
    if (!(std::abs(det) > 1e-18) || !std::isfinite(det)) return std::nullopt;
    double y1 = (-r1 * c + r2 * b) / det;
    double y2 = (-a * r2 + b * r1) / det;
    Vec delta = y1 * g + y2 * row2;
    double norm = r1 * r1 + r2 * r2;
    double step = norm < prev_norm ? 1.0 : 0.5;
    prev_norm = norm;
    z = z + step * delta;
    if (!std::isfinite(z.norm_sq())) return std::nullopt;
  }
  double r1 = f.eval(z);
  double r2 = f.gradient(z).dot(z - x);
  if (std::abs(r1) <= 1e-8 && std::abs(r2) <= 1e-8 * (1.0 + (z - x).norm())) return z;
  return std::nullopt;
}

// The Robin bound objective over a box, assembled in dual-interval
// arithmetic:  r exp(cos(theta)/(mu r)) in 2D, r / max(1 - cos(theta)/(mu r), 0)
// in 3D, with cos(theta) = |grad f . (z-x)| / (||grad f|| r) clamped into
// [0,1]. Ingredient derivatives (of the field gradient) come from Hessian
// duals, so the assembly yields both a natural enclosure and an objective
// gradient enclosure; the returned interval is the natural enclosure
// intersected with the mean-value form. Division by zero in the 3D branch
// produces the +inf sentinel the minimizer prunes on.
inline Interval robin_objective_enclosure(const ImplicitField& f, const RobinCoefficientField& mu,
                                          const Box& b, const Vec& x) {
  const int n = b.n;
  auto assemble = [&](const Box& bb) -> DualInterval {
    Dual2 F = f.eval_hess(bb);
    DualInterval one = DualInterval::constant(Interval(1.0), n);
    DualInterval r2 = DualInterval::constant(Interval(0.0), n);
    for (int i = 0; i < n; ++i) {
      DualInterval zi = DualInterval::variable(bb.dims[i], i, n);
      r2 = r2 + sqr(zi - DualInterval::constant(Interval(x[i]), n));
    }
    DualInterval r = sqrt(r2);
    DualInterval dot = DualInterval::constant(Interval(0.0), n);
    DualInterval grad_sq = DualInterval::constant(Interval(0.0), n);
    for (int j = 0; j < n; ++j) {
      DualInterval gj = DualInterval::constant(F.d[j], n);
      for (int i = 0; i < n; ++i) gj.d[i] = F.hess(i, j);
      DualInterval zj = DualInterval::variable(bb.dims[j], j, n);
      dot = dot + gj * (zj - DualInterval::constant(Interval(x[j]), n));
      grad_sq = grad_sq + sqr(gj);
    }
    DualInterval cos_theta = abs(dot) / (sqrt(grad_sq) * r);
    cos_theta = min(clamp_nonneg(cos_theta), one);
    DualInterval mu_d = mu.is_constant
                            ? DualInterval::constant(Interval(mu.constant_value), n)
                            : mu.field.eval_grad(bb);
    if (n == 2) return r * exp(cos_theta / (mu_d * r));
    return r / clamp_nonneg(one - cos_theta / (mu_d * r));
  };

  DualInterval O = assemble(b);
  Interval enc = O.v;
  bool finite = b.width() > 0.0;
  for (int i = 0; i < n && finite; ++i) finite = O.d[i].is_finite();
  if (finite) {
    DualInterval Om = assemble(Box::degenerate(b.mid()));
    Interval mv = Om.v;
    Vec m = b.mid();
    for (int i = 0; i < n; ++i) mv = mv + O.d[i] * (b.dims[i] - Interval(m[i]));
    Interval tight = intersect(enc, mv);
    if (!tight.is_empty()) enc = tight;
  }
  return enc;
}

}  // namespace detail

// Pointwise Robin radius bound at a surface point z (Robin constraint forms;
// the 3D side condition r <= cos(theta)/mu makes the bound +inf).
inline double robin_bound_point(const ImplicitField& f, const Vec& z, const Vec& x, double mu) {
  Vec dir = z - x;
  double r = dir.norm();
  if (!(r > 0.0) || !(mu > 0.0)) return kInf;
  Vec n = f.gradient(z).normalized();
  double cos_theta = std::abs(n.dot(dir)) / r;
  if (z.n == 2) return r * std::exp(cos_theta / (mu * r));
  double denom = 1.0 - cos_theta / (mu * r);
  return denom > 0.0 ? r / denom : kInf;
}

// --- closest point query -----------------------------------------------------

struct CpqResult {
  bool found = false;       // false: no boundary inside the search box
  Interval dist = Interval(kInf, kInf);
  Vec closest;
  bool converged = true;
  SearchStats stats;
};

inline CpqResult cpq(const ImplicitField& f, const Box& domain, const Vec& x,
                     const QueryConfig& cfg) {
  CpqResult out;
  out.closest = Vec::zero(x.n);

  ObjectiveInclusion obj;
  obj.box_eval = [&x](const Box& b) { return iv_norm_sq(b, x); };
  obj.point_eval = [&x](const Vec& p) { return (p - x).norm_sq(); };

  MinimizeOptions opts;
  opts.max_boxes = cfg.max_boxes;
  opts.trace = cfg.trace;
  opts.lower_refine_levels = 2;
  opts.stop_predicate = detail::sqrt_gap_stop(cfg.tolerance);
  opts.refine = [&f, &x, &domain](const Box& b) -> std::optional<std::pair<Vec, double>> {
    auto p = project_to_surface(f, b.mid());
    if (!p || !domain.contains(*p)) return std::nullopt;
    return std::make_pair(*p, detail::padded((*p - x).norm_sq()));
  };

  MinimizeResult res = minimize(obj, eq_zero(f), Acceptance{cfg.tolerance}, domain, opts);
  out.stats = res.stats;
  out.converged = res.converged;
  if (!res.feasible) return out;

  out.found = true;
  Interval d2 = res.minimum_bound;
  out.dist = sqrt(Interval(std::max(0.0, d2.lo), std::max(0.0, d2.hi)));
  if (auto p = project_to_surface(f, res.representative_point))
    out.closest = *p;
  else
    out.closest = res.representative_point;
  return out;
}

// --- ray intersection --------------------------------------------------------

struct RayHit {
  Interval t = Interval::empty();
  Vec point;
  Vec normal;
  bool grazing = false;
  bool converged = true;
  SearchStats stats;
};

// First intersection of x + t v (t in (0, t_max]) with the zero set of f,
// as a univariate branch and bound in t.
inline std::optional<RayHit> ray_intersect(const ImplicitField& f, const Box& domain,
                                           const Vec& x, const Vec& v, double t_max,
                                           const QueryConfig& cfg) {
  const int d = x.n;
  auto segment_box = [&](const Interval& t) {
    Box b;
    b.n = d;
    for (int i = 0; i < d; ++i) b.dims[i] = Interval(x[i]) + t * Interval(v[i]);
    return b;
  };
  auto ray_f = [&](double t) { return f.eval(x + t * v); };

  ConstraintInclusion con;
  con.verdict = [&](const Box& tb) {
    Box seg = intersect(segment_box(tb.dims[0]), domain);
    if (seg.is_empty()) return ThreeValued::negative;
    Interval fv = f.eval(seg);
    if (fv.is_empty() || !fv.contains_zero()) return ThreeValued::negative;
    return ThreeValued::unknown;
  };

  ObjectiveInclusion obj;
  obj.box_eval = [](const Box& tb) { return tb.dims[0]; };

  MinimizeOptions opts;
  opts.max_boxes = cfg.max_boxes;
  opts.trace = cfg.trace;
  opts.stop_predicate = [tol = cfg.tolerance](double lb, double ub) { return ub - lb <= tol; };
  opts.refine = [&](const Box& tb) -> std::optional<std::pair<Vec, double>> {
    // 1-D Newton polish of the root inside the box.
    double t = tb.dims[0].mid();
    for (int it = 0; it < 30; ++it) {
      double ft = ray_f(t);
      if (std::abs(ft) <= 1e-13) {
        Vec root = Vec::zero(1);
        root[0] = t;
        return std::make_pair(root, detail::padded(t));
      }
      Vec p = x + t * v;
      double slope = f.gradient(p).dot(v);
      if (slope == 0.0 || !std::isfinite(slope)) break;
      double tn = t - ft / slope;
      if (!(tn >= tb.dims[0].lo - cfg.tolerance) || !(tn <= tb.dims[0].hi + cfg.tolerance)) break;
      t = tn;
    }
    return std::nullopt;
  };

  Box tbox;
  tbox.n = 1;
  tbox.dims[0] = Interval(0.0, t_max);
  MinimizeResult res = minimize(obj, con, Acceptance{cfg.tolerance}, tbox, opts);

  if (!res.feasible) return std::nullopt;
  RayHit hit;
  hit.stats = res.stats;
  hit.converged = res.converged;
  hit.t = Interval(std::max(0.0, res.minimum_bound.lo), res.minimum_bound.hi);

  // Bracket across the enclosure; no sign change means a tangential graze.
  double pad = 10.0 * cfg.tolerance;
  double ta = std::max(0.0, hit.t.lo - pad);
  double tb = std::min(t_max, hit.t.hi + pad);
  double fa = ray_f(ta), fb = ray_f(tb);
  double t_hit;
  if (std::isfinite(fa) && std::isfinite(fb) && (fa > 0) != (fb > 0)) {
    for (int k = 0; k < 100; ++k) {
      double m = 0.5 * (ta + tb);
      if ((ray_f(m) > 0) == (fa > 0))
        ta = m;
      else
        tb = m;
    }
    t_hit = 0.5 * (ta + tb);
  } else {
    hit.grazing = true;
    t_hit = hit.t.mid();
    double best = std::abs(ray_f(t_hit));
    for (int k = 0; k <= 32; ++k) {
      double t = hit.t.lo + (hit.t.hi - hit.t.lo) * k / 32.0;
      double ft = std::abs(ray_f(t));
      if (ft < best) {
        best = ft;
        t_hit = t;
      }
    }
  }
  hit.point = x + t_hit * v;
  hit.normal = f.gradient(hit.point).normalized();
  return hit;
}

// --- closest silhouette point query ------------------------------------------

struct CspqResult {
  double r_silhouette = 0.0;      // post-shrink silhouette bound R_S
  double r_silhouette_raw = 0.0;  // pre-shrink minimizer distance (or the cap)
  bool silhouette_found = false;
  std::optional<Vec> witness;
  bool certified = true;  // cos(theta) > 0 certified on B(x, R_S)
  int shrink_rounds = 0;
  bool converged = true;
  SearchStats stats;
};

namespace detail {

// True when no box of B(x, radius) x {f = 0} can contain a silhouette point:
// a SOLVE for { f = 0, ||z-x|| <= radius, grad f . (z-x) = 0 } that comes
// back empty certifies cos(theta) > 0 on the capped boundary.
inline bool certify_cos_positive(const ImplicitField& f, const Box& domain, const Vec& x,
                                 double radius, const QueryConfig& cfg) {
  Box X = intersect(Box::around(x, radius), domain);
  if (X.is_empty()) return true;
  auto dot_fn = [&f, &x](const Box& b) { return dot_grad_offset(f, b, x); };
  ConstraintInclusion con =
      conj({eq_zero(f), ball(x, radius), eq_zero_of(dot_fn)});
  SolveOptions so;
  so.max_boxes = cfg.max_boxes;
  bool hit = false;
  so.on_accept = [&hit](const Box&) { hit = true; };
  SolveResult res = solve(con, Acceptance{cfg.tolerance}, X, so);
  return res.converged && !hit;
}

}  // namespace detail

// Closest silhouette point within ||z - x|| <= cap. When Robin boundaries are
// involved the result is shrunk until cos(theta) > 0 is certified on the
// capped ball; the shrink is the larger of the relative factor and 4 box
// tolerances, so certification has headroom over the acceptance width.
inline CspqResult cspq(const ImplicitField& f, const Box& domain, const Vec& x, double cap,
                       bool robin_shrink, const QueryConfig& cfg) {
  CspqResult out;
  Box X = intersect(Box::around(x, cap), domain);
  if (X.is_empty()) {
    out.r_silhouette = out.r_silhouette_raw = cap;
    return out;
  }

  auto dot_fn = [&f, &x](const Box& b) { return detail::dot_grad_offset(f, b, x); };

  ObjectiveInclusion obj;
  obj.box_eval = [&x](const Box& b) { return iv_norm_sq(b, x); };

  MinimizeOptions opts;
  opts.max_boxes = cfg.max_boxes;
  opts.trace = cfg.trace;
  opts.lower_refine_levels = 2;
  opts.stop_predicate = detail::sqrt_gap_stop(cfg.tolerance);
  opts.refine = [&](const Box& b) -> std::optional<std::pair<Vec, double>> {
    auto p = detail::project_to_silhouette(f, x, b.mid());
    if (!p || !domain.contains(*p)) return std::nullopt;
    double r2 = (*p - x).norm_sq();
    if (r2 > cap * cap) return std::nullopt;
    return std::make_pair(*p, detail::padded(r2));
  };

  MinimizeResult res = minimize(obj, conj({eq_zero(f), eq_zero_of(dot_fn), ball(x, cap)}),
                                Acceptance{cfg.tolerance}, X, opts);
  out.stats = res.stats;
  out.converged = res.converged;

  double dist_lower = 0.0;  // certified silhouette-free radius fallback
  if (!res.converged) {
    CpqResult near = cpq(f, domain, x, cfg);
    dist_lower = near.found ? near.dist.lo : cap;
    out.r_silhouette_raw = std::max(cfg.r_min, std::min(dist_lower, cap));
    out.r_silhouette = out.r_silhouette_raw;
    out.certified = false;
    return out;
  }

  if (res.feasible) {
    out.silhouette_found = true;
    out.r_silhouette_raw = std::sqrt(std::max(0.0, res.minimum_bound.lo));
    if (auto w = project_to_surface(f, res.representative_point)) out.witness = *w;
  } else {
    // No silhouette inside the closed capped ball; the exhausted search is
    // itself the cos(theta) positivity certificate, so no shrink is needed.
    out.r_silhouette_raw = cap;
    out.r_silhouette = cap;
    return out;
  }

  if (!robin_shrink) {
    out.r_silhouette = out.r_silhouette_raw;
    return out;
  }

  double rs = out.r_silhouette_raw;
  double margin = std::max(rs * cfg.shrink_factor, 4.0 * cfg.tolerance);
  rs = std::max(rs - margin, 0.0);

  for (out.shrink_rounds = 0; out.shrink_rounds < 8; ++out.shrink_rounds) {
    if (detail::certify_cos_positive(f, domain, x, rs, cfg)) {
      out.r_silhouette = rs;
      return out;
    }
    if (dist_lower == 0.0) {
      CpqResult near = cpq(f, domain, x, cfg);
      dist_lower = near.found ? near.dist.lo : cap;
    }
    rs = 0.5 * (rs + dist_lower);
  }
  // Distance to the surface is trivially silhouette-free.
  if (dist_lower == 0.0) {
    CpqResult near = cpq(f, domain, x, cfg);
    dist_lower = near.found ? near.dist.lo : cap;
  }
  out.r_silhouette = std::min(rs, dist_lower);
  out.certified = false;
  return out;
}

// --- Robin radius bound query --------------------------------------------------

struct RrbqResult {
  double radius = 0.0;
  bool unbounded = false;
  bool converged = true;
  SearchStats stats;
};

// Minimize the dimension-specific Robin bound over B(x, r_cap) x {f = 0} and
// return the lower endpoint of the bound interval, capped at r_cap. When no
// finite bound exists on the feasible set (no boundary in range, or the 3D
// side condition fails everywhere) the radius is unbounded and r_cap rules.
inline RrbqResult rrbq(const ImplicitField& f, const RobinCoefficientField& mu, const Box& domain,
                       const Vec& x, double r_cap, const QueryConfig& cfg) {
  RrbqResult out;
  const int d = f.dimension();
  Box X = intersect(Box::around(x, r_cap), domain);
  if (X.is_empty()) {
    out.unbounded = true;
    out.radius = r_cap;
    return out;
  }

  ObjectiveInclusion obj;
  obj.box_eval = [&](const Box& b) { return detail::robin_objective_enclosure(f, mu, b, x); };

  MinimizeOptions opts;
  opts.max_boxes = cfg.max_boxes;
  opts.trace = cfg.trace;
  opts.lower_refine_levels = 3;
  opts.stop_predicate = [tol = cfg.tolerance](double lb, double ub) {
    return ub - lb <= 5.0 * tol;
  };
  opts.refine = [&](const Box& b) -> std::optional<std::pair<Vec, double>> {
    auto p = project_to_surface(f, b.mid());
    if (!p || !domain.contains(*p)) return std::nullopt;
    if ((*p - x).norm() > r_cap) return std::nullopt;
    double bound = robin_bound_point(f, *p, x, mu.eval(*p));
    if (!std::isfinite(bound)) return std::nullopt;
    return std::make_pair(*p, detail::padded(bound));
  };

  MinimizeResult res =
      minimize(obj, conj({eq_zero(f), ball(x, r_cap)}), Acceptance{cfg.tolerance}, X, opts);
  out.stats = res.stats;

  if (!res.converged) {
    out.converged = false;
    CpqResult near = cpq(f, domain, x, cfg);
    out.radius = std::max(cfg.r_min, std::min(near.found ? near.dist.lo : r_cap, r_cap));
    return out;
  }
  if (!res.feasible || res.minimum_bound.lo == kInf) {
    out.unbounded = true;
    out.radius = r_cap;
    return out;
  }
  out.radius = std::min(res.minimum_bound.lo, r_cap);
  return out;
}

// --- boundary point sampling ---------------------------------------------------

struct GammaSample {
  Vec point;
  double pdf_estimate = 0.0;  // uniform-density estimate 1/|Gamma|
  Box source_box;
};

// Sample n points of Gamma = B(x,R) x {f = 0} by covering Gamma with SOLVE
// and reservoir-sampling the accepted boxes, weighted by their estimated
// boundary measure: width^(d-1) scaled by ||grad f|| / max_i |d_i f| at the
// box midpoint (the co-area slant correction).
inline std::vector<GammaSample> sample_gamma(const ImplicitField& f, const Box& domain,
                                             const Vec& x, double radius, size_t count,
                                             RandomStream& rng, const QueryConfig& cfg) {
  std::vector<GammaSample> out;
  Box X = intersect(Box::around(x, radius), domain);
  if (X.is_empty() || count == 0) return out;

  const int d = f.dimension();
  WeightedReservoirSampler<Box> reservoir(count);

  SolveOptions so;
  so.max_boxes = cfg.max_boxes;
  so.trace = cfg.trace;
  so.on_accept = [&](const Box& b) {
    double w = b.width();
    double weight = d == 2 ? w : w * w;
    // Slant correction: a surface patch of unit area crosses ~|grad f|_1 /
    // (|grad f| w^(d-1)) boxes of an axis-aligned dyadic cover, so each box
    // carries measure ~ w^(d-1) |grad f| / |grad f|_1.
    Vec g = f.gradient(b.mid());
    double gn = g.norm();
    double g_l1 = 0.0;
    for (int i = 0; i < d; ++i) g_l1 += std::abs(g[i]);
    if (std::isfinite(gn) && g_l1 > 0.0) weight *= gn / g_l1;
    reservoir.add(b, weight, rng);
  };
  solve(conj({eq_zero(f), ball(x, radius)}), Acceptance{cfg.tolerance}, X, so);

  double total = reservoir.total_weight();
  if (!(total > 0.0)) return out;
  for (Box& b : reservoir.take()) {
    auto p = project_to_surface(f, b.mid());
    if (!p) continue;
    if (std::abs(f.eval(*p)) > cfg.tolerance) continue;
    if ((*p - x).norm() > radius + cfg.tolerance) continue;
    GammaSample s;
    s.point = *p;
    s.pdf_estimate = 1.0 / total;
    s.source_box = b;
    out.push_back(std::move(s));
  }
  return out;
}

// --- per-step query bundle -----------------------------------------------------

struct StarRegion {
  Vec x;
  Interval dirichlet_dist = Interval(kInf, kInf);  // R_D
  Vec closest_dirichlet;
  double r_silhouette = 0.0;  // R_S
  double r_robin = 0.0;       // R_R
  bool dirichlet_absent = false;
  bool reflecting_absent = false;
  bool rrbq_unbounded = false;
  bool converged = true;
};

// cpq -> cspq (capped by R_D) -> rrbq (capped by R_S; skipped for Neumann).
// The r_min floor applies to the step radii R_S and R_R, never to the
// measured Dirichlet distance.
inline StarRegion star_radius(const Scene& scene, const Vec& x, const QueryConfig& cfg) {
  StarRegion st;
  st.x = x;
  st.closest_dirichlet = Vec::zero(x.n);

  if (scene.dirichlet_field) {
    CpqResult c = cpq(*scene.dirichlet_field, scene.domain_box, x, cfg);
    st.converged = st.converged && c.converged;
    if (c.found) {
      st.dirichlet_dist = c.dist;
      st.closest_dirichlet = c.closest;
    } else {
      st.dirichlet_absent = true;
    }
  } else {
    st.dirichlet_absent = true;
  }

  double cap = st.dirichlet_absent ? scene.domain_box.diameter() : st.dirichlet_dist.lo;

  if (scene.robin_field) {
    bool robin = scene.has_robin_coefficient();
    CspqResult s = cspq(*scene.robin_field, scene.domain_box, x, cap, robin, cfg);
    st.converged = st.converged && s.converged;
    st.r_silhouette = std::min(s.r_silhouette, cap);
    if (robin) {
      RrbqResult r = rrbq(*scene.robin_field, *scene.mu, scene.domain_box, x, st.r_silhouette, cfg);
      st.converged = st.converged && r.converged;
      st.rrbq_unbounded = r.unbounded;
      st.r_robin = std::min(r.radius, st.r_silhouette);
    } else {
      st.r_robin = st.r_silhouette;
    }
  } else {
    st.reflecting_absent = true;
    st.r_silhouette = cap;
    st.r_robin = cap;
  }

  if (cfg.r_min > 0.0) {
    st.r_silhouette = std::max(st.r_silhouette, cfg.r_min);
    st.r_robin = std::max(st.r_robin, cfg.r_min);
  }
  return st;
}

}  // namespace wost
