#pragma once

// Dense-sampling brute-force oracles. These answer the same questions as the
// branch-and-bound queries by direct enumeration: grid the domain, detect
// sign changes along grid edges, bisect each crossing onto the surface, then
// evaluate objectives pointwise. They deliberately share no code path with
// minimize/solve so the two can check each other.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "wost/box.hpp"
#include "wost/expr.hpp"
#include "wost/scene.hpp"

namespace wost {

// Surface points found by edge bisection on an n-per-axis grid over `box`,
// refined to |f| <= refine_tol. Sample spacing is about one grid cell.
inline std::vector<SurfaceSample> sample_surface_grid(const ImplicitField& f, const Box& box,
                                                      int n, double refine_tol = 1e-12) {
  std::vector<SurfaceSample> out;
  const int d = box.n;
  std::array<double, 3> lo{}, step{};
  for (int i = 0; i < d; ++i) {
    lo[i] = box.dims[i].lo;
    step[i] = box.dims[i].width() / n;
  }
  auto node = [&](int ix, int iy, int iz) {
    Vec p = Vec::zero(d);
    p[0] = lo[0] + ix * step[0];
    p[1] = lo[1] + iy * step[1];
    if (d == 3) p[2] = lo[2] + iz * step[2];
    return p;
  };

  const int nz = d == 3 ? n : 0;
  std::vector<double> plane_vals[2];
  auto fill_plane = [&](int iz, std::vector<double>& vals) {
    vals.assign(static_cast<size_t>(n + 1) * (n + 1), 0.0);
    for (int iy = 0; iy <= n; ++iy)
      for (int ix = 0; ix <= n; ++ix)
        vals[static_cast<size_t>(iy) * (n + 1) + ix] = f.eval(node(ix, iy, iz));
  };

  auto bisect_edge = [&](Vec a, Vec b, double fa, double fb) {
    for (int k = 0; k < 80; ++k) {
      Vec m = 0.5 * (a + b);
      double fm = f.eval(m);
      if (std::abs(fm) <= refine_tol) {
        out.push_back(make_surface_sample(f, m));
        return;
      }
      if ((fm > 0) == (fa > 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
        fb = fm;
      }
    }
    out.push_back(make_surface_sample(f, 0.5 * (a + b)));
  };

  fill_plane(0, plane_vals[0]);
  for (int iz = 0; iz <= nz; ++iz) {
    const std::vector<double>& cur = plane_vals[iz % 2];
    for (int iy = 0; iy <= n; ++iy) {
      for (int ix = 0; ix <= n; ++ix) {
        double v = cur[static_cast<size_t>(iy) * (n + 1) + ix];
        if (ix < n) {
          double vx = cur[static_cast<size_t>(iy) * (n + 1) + ix + 1];
          if (std::isfinite(v) && std::isfinite(vx) && (v > 0) != (vx > 0))
            bisect_edge(node(ix, iy, iz), node(ix + 1, iy, iz), v, vx);
        }
        if (iy < n) {
          double vy = cur[static_cast<size_t>(iy + 1) * (n + 1) + ix];
          if (std::isfinite(v) && std::isfinite(vy) && (v > 0) != (vy > 0))
            bisect_edge(node(ix, iy, iz), node(ix, iy + 1, iz), v, vy);
        }
      }
    }
    if (d == 3 && iz < nz) {
      fill_plane(iz + 1, plane_vals[(iz + 1) % 2]);
      const std::vector<double>& nxt = plane_vals[(iz + 1) % 2];
      for (int iy = 0; iy <= n; ++iy) {
        for (int ix = 0; ix <= n; ++ix) {
          double v = cur[static_cast<size_t>(iy) * (n + 1) + ix];
          double vz = nxt[static_cast<size_t>(iy) * (n + 1) + ix];
          if (std::isfinite(v) && std::isfinite(vz) && (v > 0) != (vz > 0))
            bisect_edge(node(ix, iy, iz), node(ix, iy, iz + 1), v, vz);
        }
      }
    }
  }
  return out;
}

struct OracleMin {
  bool found = false;
  double value = std::numeric_limits<double>::infinity();
  Vec argmin;
  // One-sided resolution: the true minimum lies in [value - err, value].
  double err = 0.0;
};

// Closest point: min ||y - x|| over surface samples.
inline OracleMin oracle_cpq(const std::vector<SurfaceSample>& samples, const Vec& x,
                            double sample_spacing) {
  OracleMin r;
  for (const auto& s : samples) {
    double d = distance(s.position, x);
    if (d < r.value) {
      r.value = d;
      r.argmin = s.position;
      r.found = true;
    }
  }
  r.err = sample_spacing;
  return r;
}

// Closest silhouette point: min distance over samples whose normal is within
// cos_tol of perpendicular to the viewing direction, capped at r <= cap.
inline OracleMin oracle_silhouette(const std::vector<SurfaceSample>& samples, const Vec& x,
                                   double cap, double cos_tol, double sample_spacing) {
  OracleMin r;
  for (const auto& s : samples) {
    Vec dir = s.position - x;
    double d = dir.norm();
    if (d > cap || d == 0.0) continue;
    double c = std::abs(s.unit_normal.dot(dir)) / d;
    if (c <= cos_tol && d < r.value) {
      r.value = d;
      r.argmin = s.position;
      r.found = true;
    }
  }
  r.err = sample_spacing;
  return r;
}

// The pointwise Robin radius bound of a surface point (2D/3D forms). The 3D
// side condition r <= cos(theta)/mu makes the bound +inf.
inline double robin_bound_at(const SurfaceSample& s, const Vec& x, double mu, int dim) {
  Vec dir = s.position - x;
  double r = dir.norm();
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  double cos_theta = std::abs(s.unit_normal.dot(dir)) / r;
  if (dim == 2) return r * std::exp(cos_theta / (mu * r));
  double denom = 1.0 - cos_theta / (mu * r);
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return r / denom;
}

// min of the Robin bound over samples within r <= cap. found=false when no
// sample is in range; value=+inf when the bound is unbounded everywhere in
// range (3D side condition).
inline OracleMin oracle_robin_bound(const std::vector<SurfaceSample>& samples, const Vec& x,
                                    const std::function<double(const Vec&)>& mu, int dim,
                                    double cap, double sample_spacing) {
  OracleMin r;
  bool any_in_range = false;
  for (const auto& s : samples) {
    double d = distance(s.position, x);
    if (d > cap || d == 0.0) continue;
    any_in_range = true;
    double b = robin_bound_at(s, x, mu(s.position), dim);
    if (b < r.value) {
      r.value = b;
      r.argmin = s.position;
    }
  }
  r.found = any_in_range;
  r.err = sample_spacing;
  return r;
}

inline std::vector<SurfaceSample> filter_ball(const std::vector<SurfaceSample>& samples,
                                              const Vec& x, double radius) {
  std::vector<SurfaceSample> out;
  for (const auto& s : samples)
    if (distance(s.position, x) <= radius) out.push_back(s);
  return out;
}

// Local polish of a surface-constrained minimum: projected tangential descent
// from a seed (normally the best dense sample), with numeric objective
// gradients and backtracking. Keeps iterates on { f = 0 } (re-projected each
// step) and inside the optional ball cap. Independent of the interval engine.
inline Vec polish_on_surface(const ImplicitField& f, Vec p,
                             const std::function<double(const Vec&)>& objective,
                             const Vec* ball_center = nullptr, double ball_radius = 0.0,
                             double min_step = 1e-9) {
  const int d = p.n;
  auto feasible = [&](const Vec& q) {
    return !ball_center || distance(q, *ball_center) <= ball_radius;
  };
  double best = objective(p);
  double step = 0.05;
  for (int iter = 0; iter < 400 && step > min_step; ++iter) {
    // numeric gradient of the objective
    Vec g = Vec::zero(d);
    const double h = 1e-7;
    for (int i = 0; i < d; ++i) {
      Vec pp = p, pm = p;
      pp[i] += h;
      pm[i] -= h;
      g[i] = (objective(pp) - objective(pm)) / (2 * h);
    }
    Vec n = f.gradient(p).normalized();
    Vec t = g - g.dot(n) * n;  // tangential component
    double tn = t.norm();
    if (!(tn > 0.0)) break;
    bool moved = false;
    while (step > min_step) {
      auto q = project_to_surface(f, p - (step / tn) * t);
      if (q && feasible(*q)) {
        double v = objective(*q);
        if (v < best) {
          p = *q;
          best = v;
          moved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return p;
}

// First ray hit by dense t-marching with bisection refinement.
inline std::optional<double> oracle_ray_march(const ImplicitField& f, const Vec& x, const Vec& v,
                                              double t_max, double step) {
  double t0 = 0.0;
  double f0 = f.eval(x);
  for (double t = step; t <= t_max + step * 0.5; t += step) {
    double tc = std::min(t, t_max);
    double fc = f.eval(x + tc * v);
    if (std::isfinite(f0) && std::isfinite(fc) && (fc > 0) != (f0 > 0)) {
      double a = t0, b = tc;
      for (int k = 0; k < 100; ++k) {
        double m = 0.5 * (a + b);
        double fm = f.eval(x + m * v);
        if ((fm > 0) == (f0 > 0))
          a = m;
        else
          b = m;
      }
      return 0.5 * (a + b);
    }
    t0 = tc;
    f0 = fc;
  }
  return std::nullopt;
}

}  // namespace wost
