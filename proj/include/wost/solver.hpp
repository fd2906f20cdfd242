#pragma once

// Walk-on-stars Monte Carlo estimator for Laplace problems with Dirichlet +
// Neumann/Robin boundaries given by a Scene. Each step computes the star
// radius bundle (closest Dirichlet point, silhouette bound, Robin bound),
// samples a uniform direction, and either reflects off the boundary hit by
// the ray within the star radius or moves to the sphere point.
//
// On a reflecting hit at z with ball radius R the throughput picks up the
// reflectance
//     rho = 1 - mu(z) * q(r, R) / cos(theta),
// and Robin data h contributes  q(r, R) / cos(theta) * h(z)  to the running
// sum, where q is the ball Green's-function-to-Poisson-kernel ratio
// (r ln(R/r) in 2D, r (1 - r/R) in 3D). The Robin radius bound construction
// makes rho land in [0,1], so walks stay stable; mu = 0 reduces rho to 1
// (Neumann) on the same code path.
//
// Determinism contract: walk i draws only from a stream keyed by
// (seed, stream_offset + i); contributions are stored per-walk and reduced by
// fixed-shape pairwise summation, so results are bit-identical for a fixed
// seed across thread counts.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "wost/queries.hpp"
#include "wost/rng.hpp"
#include "wost/scene.hpp"

namespace wost {

struct PDEProblem {
  Scene scene;

  static PDEProblem from_scene(Scene s) {
    if (!s.dirichlet_field)
      throw SceneError("PDE problem requires a Dirichlet boundary (walks must terminate)");
    if (!s.dirichlet_data)
      throw SceneError("PDE problem requires Dirichlet data g");
    if (s.mu && !s.robin_field)
      throw SceneError("Robin coefficient given without a reflecting boundary");
    return PDEProblem{std::move(s)};
  }

  bool robin_mode() const { return scene.has_robin_coefficient(); }
};

struct WalkConfig {
  double r_min = 0.0;  // 0: use epsilon_shell / 2
  int max_steps = 10'000;
  uint64_t n_walks = 10'000;
  uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
  double tolerance_override = 0.0;

  double resolve_r_min(const Scene& s) const { return r_min > 0.0 ? r_min : 0.5 * s.epsilon_shell; }
  QueryConfig query_config(const Scene& s) const {
    QueryConfig q = QueryConfig::for_scene(s);
    if (tolerance_override > 0.0) q.tolerance = tolerance_override;
    q.r_min = resolve_r_min(s);
    return q;
  }
};

struct EstimateStats {
  double mean = 0.0;
  double std_error = 0.0;
  uint64_t n_walks = 0;
  double mean_steps = 0.0;
  uint64_t truncated_walks = 0;
};

struct WalkOutcome {
  double contribution = 0.0;
  int steps = 0;
  bool truncated = false;
};

// Test instrumentation: called once per reflecting hit.
struct WalkObserver {
  std::function<void(double rho, double throughput, double r, double cos_theta)> on_reflection;
};

// Green's function / Poisson kernel ratio of the ball B(.,R) at an interior
// boundary point with r = ||z - x||; zero at r = R, positive inside.
inline double green_poisson_ratio(double r, double R, int dim) {
  if (!(r > 0.0) || r >= R) return 0.0;
  return dim == 2 ? r * std::log(R / r) : r * (1.0 - r / R);
}

// rho_mu in [0,1] whenever r <= Robin radius bound of the ball.
inline double reflectance(double mu, double r, double cos_theta, double R, int dim) {
  if (mu == 0.0) return 1.0;
  return 1.0 - mu * green_poisson_ratio(r, R, dim) / cos_theta;
}

inline WalkOutcome walk_once(const PDEProblem& problem, const Vec& x0, const WalkConfig& cfg,
                             RandomStream& rng, const WalkObserver* observer = nullptr) {
  const Scene& sc = problem.scene;
  const int d = sc.dimension;
  const QueryConfig qcfg = cfg.query_config(sc);
  const double r_min = cfg.resolve_r_min(sc);
  const ImplicitField& g = *sc.dirichlet_data;

  WalkOutcome out;
  Vec x = x0;
  double throughput = 1.0;
  double accum = 0.0;

  for (out.steps = 0; out.steps < cfg.max_steps; ++out.steps) {
    StarRegion star = star_radius(sc, x, qcfg);
    if (!star.dirichlet_absent && star.dirichlet_dist.hi <= sc.epsilon_shell) {
      out.contribution = accum + throughput * g.eval(star.closest_dirichlet);
      return out;
    }
    bool clamped = star.r_robin < r_min;
    double R = std::max(star.r_robin, r_min);
    Vec dir = rng.unit_direction(d);

    std::optional<RayHit> hit;
    if (sc.robin_field) hit = ray_intersect(*sc.robin_field, sc.domain_box, x, dir, R, qcfg);

    if (hit && std::abs(sc.robin_field->eval(hit->point)) <= qcfg.tolerance) {
      const Vec& z = hit->point;
      Vec offset = z - x;
      double r = offset.norm();
      if (r > 0.0) {
        double cos_theta = std::abs(hit->normal.dot(offset)) / r;
        double q = green_poisson_ratio(r, R, d);
        double mu_z = sc.mu ? sc.mu->eval(z) : 0.0;
        double rho = cos_theta > 0.0 ? 1.0 - mu_z * q / cos_theta : 0.0;
        if (clamped) rho = std::clamp(rho, 0.0, 1.0);
        if (sc.robin_data && cos_theta > 0.0)
          accum += throughput * (q / cos_theta) * sc.robin_data->eval(z);
        throughput *= rho;
        if (observer && observer->on_reflection)
          observer->on_reflection(rho, throughput, r, cos_theta);
        // Step off the boundary: the domain is { f < 0 }, so inward is
        // against the gradient.
        x = z - (0.5 * r_min) * hit->normal;
        continue;
      }
    }
    x = x + R * dir;
  }

  // Truncated: settle at the Dirichlet projection of the current point.
  out.truncated = true;
  double settle = 0.0;
  if (sc.dirichlet_field) {
    CpqResult c = cpq(*sc.dirichlet_field, sc.domain_box, x, qcfg);
    if (c.found) settle = g.eval(c.closest);
  }
  out.contribution = accum + throughput * settle;
  return out;
}

namespace detail {

// Fixed-shape pairwise reduction; order independent of thread count.
inline double pairwise_sum(const double* v, size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

template <class Fn>
inline void parallel_for(uint64_t count, int threads, Fn&& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  unsigned t = threads > 0 ? static_cast<unsigned>(threads) : (hw > 0 ? hw : 1);
  t = std::min<unsigned>(t, count > 0 ? static_cast<unsigned>(std::min<uint64_t>(count, 256)) : 1);
  if (t <= 1) {
    for (uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned k = 0; k < t; ++k) {
    uint64_t begin = count * k / t;
    uint64_t end = count * (k + 1) / t;
    pool.emplace_back([begin, end, &fn] {
      for (uint64_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Monte Carlo mean over n_walks independent walks started at x. Walk i uses
// the stream (seed, stream_offset + i).
inline EstimateStats estimate(const PDEProblem& problem, const Vec& x, const WalkConfig& cfg,
                              uint64_t stream_offset = 0) {
  const uint64_t n = cfg.n_walks;
  if (n == 0) throw std::invalid_argument("n_walks must be positive");
  std::vector<double> contributions(n);
  std::vector<int> steps(n);
  std::vector<uint8_t> truncated(n);

  detail::parallel_for(n, cfg.threads, [&](uint64_t i) {
    RandomStream rng(cfg.seed, stream_offset + i);
    WalkOutcome o = walk_once(problem, x, cfg, rng);
    contributions[i] = o.contribution;
    steps[i] = o.steps;
    truncated[i] = o.truncated ? 1 : 0;
  });

  EstimateStats st;
  st.n_walks = n;
  for (uint64_t i = 0; i < n; ++i) st.truncated_walks += truncated[i];
  if (st.truncated_walks == n)
    throw std::runtime_error("all walks truncated before reaching the Dirichlet shell; "
                             "increase max_steps");

  st.mean = detail::pairwise_sum(contributions.data(), n) / static_cast<double>(n);
  std::vector<double> sq(n);
  for (uint64_t i = 0; i < n; ++i) {
    double dvi = contributions[i] - st.mean;
    sq[i] = dvi * dvi;
  }
  if (n > 1) {
    double var = detail::pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
    st.std_error = std::sqrt(var / static_cast<double>(n));
  }
  double step_total = 0.0;
  for (uint64_t i = 0; i < n; ++i) step_total += steps[i];
  st.mean_steps = step_total / static_cast<double>(n);
  return st;
}

struct GridSpec {
  int nx = 32, ny = 32, nz = 1;  // nz ignored in 2D
  Box region;                    // empty: scene domain box

  int cell_count(int dim) const { return nx * ny * (dim == 3 ? nz : 1); }
};

struct GridPoint {
  Vec position;
  bool inside = false;
  double mean = 0.0;
  double std_error = 0.0;
  uint64_t n_walks = 0;
};

// Per-node estimates at cell centers, row-major with x fastest. Nodes outside
// the domain (any boundary field >= 0) are marked absent. Parallel over
// points; per-point walks are sequential with streams keyed by
// point_index * n_walks + walk_index, so thread count never changes results.
inline std::vector<GridPoint> grid_estimate(const PDEProblem& problem, const GridSpec& spec,
                                            const WalkConfig& cfg) {
  const Scene& sc = problem.scene;
  const int d = sc.dimension;
  Box region = spec.region.n == d ? spec.region : sc.domain_box;
  const int nz = d == 3 ? spec.nz : 1;
  const uint64_t total = static_cast<uint64_t>(spec.nx) * spec.ny * nz;

  std::vector<GridPoint> grid(total);
  auto node_pos = [&](uint64_t idx) {
    int ix = static_cast<int>(idx % spec.nx);
    int iy = static_cast<int>((idx / spec.nx) % spec.ny);
    int iz = static_cast<int>(idx / (static_cast<uint64_t>(spec.nx) * spec.ny));
    Vec p = Vec::zero(d);
    p[0] = region.dims[0].lo + region.dims[0].width() * (ix + 0.5) / spec.nx;
    p[1] = region.dims[1].lo + region.dims[1].width() * (iy + 0.5) / spec.ny;
    if (d == 3) p[2] = region.dims[2].lo + region.dims[2].width() * (iz + 0.5) / nz;
    return p;
  };

  WalkConfig point_cfg = cfg;
  point_cfg.threads = 1;  // outer loop owns the parallelism
  detail::parallel_for(total, cfg.threads, [&](uint64_t idx) {
    GridPoint& gp = grid[idx];
    gp.position = node_pos(idx);
    gp.inside = sc.inside(gp.position);
    if (!gp.inside) return;
    EstimateStats st = estimate(problem, gp.position, point_cfg, idx * cfg.n_walks);
    gp.mean = st.mean;
    gp.std_error = st.std_error;
    gp.n_walks = st.n_walks;
  });
  return grid;
}

}  // namespace wost
