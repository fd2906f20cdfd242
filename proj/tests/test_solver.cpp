#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wost/scene_parse.hpp"
#include "wost/solver.hpp"

using namespace wost;

namespace {

const std::string kSceneDir = WOST_SCENE_DIR;

Scene load(const char* name) { return load_scene_file(kSceneDir + "/" + std::string(name) + ".json"); }

// Radial solution u(r) = A + B log r of the annulus problem with Dirichlet
// u = g_b at r = b and Robin du/dn + mu u = h at r = a (outward normal of the
// annulus at the inner circle points toward the origin):
//   -B/a + mu (A + B log a) = h,  A + B log b = g_b.
struct RadialSolution {
  double A, B;
  double operator()(double r) const { return A + B * std::log(r); }
};

RadialSolution annulus_solution(double a, double b, double mu, double h, double g_b) {
  // solve the 2x2 system for (A, B)
  double m00 = mu, m01 = mu * std::log(a) - 1.0 / a;
  double m10 = 1.0, m11 = std::log(b);
  double det = m00 * m11 - m01 * m10;
  double A = (h * m11 - m01 * g_b) / det;
  double B = (m00 * g_b - h * m10) / det;
  return {A, B};
}

}  // namespace

TEST_CASE("reflectance properties") {
  // rho = 1 at mu = 0, in [0,1] within the Robin bound, decreasing in mu
  CHECK(reflectance(0.0, 0.5, 0.7, 1.0, 2) == 1.0);
  CHECK(reflectance(0.0, 0.5, 0.7, 1.0, 3) == 1.0);
  for (int dim : {2, 3}) {
    double r = 0.6, cos_theta = 0.8, mu = 1.3;
    // the pointwise bound from the constraint forms
    double bound = dim == 2 ? r * std::exp(cos_theta / (mu * r))
                            : r / (1.0 - cos_theta / (mu * r));
    if (dim == 3 && !(r > cos_theta / mu)) continue;
    double rho_at_bound = reflectance(mu, r, cos_theta, bound, dim);
    CHECK(rho_at_bound >= -1e-12);
    CHECK(rho_at_bound <= 1.0);
    double rho_tighter = reflectance(mu, r, cos_theta, 0.9 * bound, dim);
    CHECK(rho_tighter >= rho_at_bound - 1e-12);
    CHECK(rho_tighter <= 1.0);
    // slightly larger ball than the bound admits rho < 0
    double rho_loose = reflectance(mu, r, cos_theta, 1.05 * bound, dim);
    CHECK(rho_loose < rho_at_bound);
  }
}

TEST_CASE("dirichlet-only disk with constant data has zero variance") {
  Scene s = load("disk2d_const");
  PDEProblem prob = PDEProblem::from_scene(s);
  WalkConfig cfg;
  cfg.n_walks = 64;
  cfg.seed = 3;
  EstimateStats st = estimate(prob, Vec(0.3, 0.4), cfg);
  CHECK(st.mean == 1.0);
  CHECK(st.std_error == 0.0);
  CHECK(st.truncated_walks == 0);
}

TEST_CASE("neumann scene with constant dirichlet data stays constant") {
  Scene s = load("annulus2d_neumann");
  PDEProblem prob = PDEProblem::from_scene(s);
  WalkConfig cfg;
  cfg.n_walks = 16;
  cfg.seed = 5;
  EstimateStats st = estimate(prob, Vec(0.75, 0.0), cfg);
  CHECK(st.mean == 1.0);
  CHECK(st.std_error == 0.0);
}

TEST_CASE("neumann limit instrumentation: rho identically 1") {
  Scene s = load("annulus2d_neumann");
  PDEProblem prob = PDEProblem::from_scene(s);
  WalkConfig cfg;
  cfg.seed = 11;
  int reflections = 0;
  WalkObserver obs;
  obs.on_reflection = [&](double rho, double throughput, double, double) {
    ++reflections;
    CHECK(rho == 1.0);
    CHECK(throughput == 1.0);
  };
  RandomStream rng(cfg.seed, 0);
  for (int w = 0; w < 40; ++w) walk_once(prob, Vec(0.6, 0.2), cfg, rng, &obs);
  CHECK(reflections > 0);
}

TEST_CASE("robin walk throughput stays in [0,1]") {
  Scene s = load("annulus2d_robin");
  PDEProblem prob = PDEProblem::from_scene(s);
  WalkConfig cfg;
  cfg.seed = 13;
  WalkObserver obs;
  int reflections = 0;
  obs.on_reflection = [&](double rho, double throughput, double, double) {
    ++reflections;
    CHECK(rho >= 0.0);
    CHECK(rho <= 1.0);
    CHECK(throughput >= 0.0);
    CHECK(throughput <= 1.0);
  };
  RandomStream rng(cfg.seed, 7);
  for (int w = 0; w < 25; ++w) walk_once(prob, Vec(0.62, -0.1), cfg, rng, &obs);
  CHECK(reflections > 0);
}

TEST_CASE("harmonic disk: u = x at an interior point") {
  Scene s = load("disk2d_dirichlet");
  PDEProblem prob = PDEProblem::from_scene(s);
  WalkConfig cfg;
  cfg.n_walks = 3000;
  cfg.seed = 17;
  EstimateStats st = estimate(prob, Vec(0.3, 0.4), cfg);
  REQUIRE(st.std_error > 0.0);
  CHECK(std::abs(st.mean - 0.3) <= 3.0 * st.std_error + 2e-3);
}

TEST_CASE("annulus robin problem matches the radial closed form") {
  Scene s = load("annulus2d_robin");
  PDEProblem prob = PDEProblem::from_scene(s);
  WalkConfig cfg;
  cfg.n_walks = 1200;
  cfg.seed = 29;
  RadialSolution u = annulus_solution(0.5, 1.0, 1.0, 0.0, 1.0);
  EstimateStats st = estimate(prob, Vec(0.75, 0.0), cfg);
  CHECK(st.truncated_walks == 0);
  CHECK(std::abs(st.mean - u(0.75)) <= 3.0 * st.std_error + 2e-3);
}

TEST_CASE("neumann data term matches the radial closed form") {
  Scene s = load("annulus2d_neumann");
  s.robin_data = ImplicitField::constant(2, 0.8);
  PDEProblem prob = PDEProblem::from_scene(s);
  WalkConfig cfg;
  cfg.n_walks = 1200;
  cfg.seed = 31;
  // mu = 0: -B/a = h, A = g_b at b = 1
  RadialSolution u = annulus_solution(0.5, 1.0, 0.0, 0.8, 1.0);
  EstimateStats st = estimate(prob, Vec(0.75, 0.0), cfg);
  CHECK(std::abs(st.mean - u(0.75)) <= 3.0 * st.std_error + 3e-3);
}

TEST_CASE("fixed seed is bit-for-bit deterministic across runs and threads") {
  Scene s = load("disk2d_dirichlet");
  PDEProblem prob = PDEProblem::from_scene(s);
  WalkConfig cfg;
  cfg.n_walks = 400;
  cfg.seed = 101;
  cfg.threads = 1;
  EstimateStats a = estimate(prob, Vec(0.1, -0.2), cfg);
  EstimateStats b = estimate(prob, Vec(0.1, -0.2), cfg);
  cfg.threads = 2;
  EstimateStats c = estimate(prob, Vec(0.1, -0.2), cfg);
  cfg.threads = 4;
  EstimateStats d = estimate(prob, Vec(0.1, -0.2), cfg);
  CHECK(a.mean == b.mean);
  CHECK(a.mean == c.mean);
  CHECK(a.mean == d.mean);
  CHECK(a.std_error == c.std_error);
}

TEST_CASE("monte carlo error decays like 1/sqrt(n)") {
  Scene s = load("disk2d_dirichlet");
  PDEProblem prob = PDEProblem::from_scene(s);
  for (uint64_t seed : {1001ull, 1002ull, 1003ull}) {
    WalkConfig small;
    small.n_walks = 1500;
    small.seed = seed;
    WalkConfig big;
    big.n_walks = 6000;
    big.seed = seed + 50;
    EstimateStats se_n = estimate(prob, Vec(0.25, 0.35), small);
    EstimateStats se_4n = estimate(prob, Vec(0.25, 0.35), big);
    CHECK(se_4n.std_error <= 0.6 * se_n.std_error);
  }
}

TEST_CASE("maximum principle: estimates within the dirichlet data range") {
  Scene s = load("blobs2d");
  PDEProblem prob = PDEProblem::from_scene(s);
  WalkConfig cfg;
  cfg.n_walks = 300;
  cfg.seed = 41;
  // g = y on the circle of radius 1.8
  for (const Vec& x : {Vec(1.2, 0.6), Vec(0.0, 1.0), Vec(-0.9, -0.8)}) {
    EstimateStats st = estimate(prob, x, cfg);
    CHECK(st.mean >= -1.8 - 3.0 * st.std_error);
    CHECK(st.mean <= 1.8 + 3.0 * st.std_error);
  }
}

TEST_CASE("all-truncated run raises an error") {
  Scene s = load("annulus2d_robin");
  PDEProblem prob = PDEProblem::from_scene(s);
  WalkConfig cfg;
  cfg.n_walks = 8;
  cfg.max_steps = 1;
  cfg.seed = 7;
  CHECK_THROWS_WITH(estimate(prob, Vec(0.75, 0.0), cfg),
                    Catch::Matchers::ContainsSubstring("max_steps"));
}

TEST_CASE("grid estimate marks outside points and keeps constants constant") {
  Scene s = load("disk2d_const");
  PDEProblem prob = PDEProblem::from_scene(s);
  WalkConfig cfg;
  cfg.n_walks = 32;
  cfg.seed = 3;
  GridSpec spec;
  spec.nx = 8;
  spec.ny = 8;
  auto grid = grid_estimate(prob, spec, cfg);
  REQUIRE(grid.size() == 64);
  int inside = 0;
  for (const auto& gp : grid) {
    if (!gp.inside) continue;
    ++inside;
    CHECK(gp.mean == 1.0);
    CHECK(gp.std_error == 0.0);
  }
  CHECK(inside > 10);
  CHECK(inside < 64);
  // corner cells lie outside the disk
  CHECK(!grid.front().inside);
  CHECK(!grid.back().inside);

  // two thread counts, identical field
  WalkConfig cfg2 = cfg;
  cfg2.threads = 2;
  auto grid2 = grid_estimate(prob, spec, cfg2);
  for (size_t i = 0; i < grid.size(); ++i) CHECK(grid[i].mean == grid2[i].mean);
}
