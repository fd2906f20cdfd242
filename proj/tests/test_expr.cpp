#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "wost/expr.hpp"
#include "wost/oracle.hpp"
#include "wost/rng.hpp"
#include "wost/scene.hpp"

using namespace wost;

namespace {

Vec sample_in(const Box& b, RandomStream& rng) {
  Vec p = Vec::zero(b.n);
  for (int i = 0; i < b.n; ++i) p[i] = rng.uniform(b.dims[i].lo, b.dims[i].hi);
  return p;
}

Box random_box_in(const Box& outer, RandomStream& rng, double max_width) {
  Box b;
  b.n = outer.n;
  for (int i = 0; i < outer.n; ++i) {
    double w = rng.uniform(1e-3, max_width);
    double lo = rng.uniform(outer.dims[i].lo, outer.dims[i].hi - std::min(w, outer.dims[i].width()));
    b.dims[i] = Interval(lo, lo + w);
  }
  return b;
}

struct NamedField {
  const char* name;
  ImplicitField field;
  Box domain;
};

std::vector<NamedField> corpus_2d() {
  std::vector<NamedField> out;
  Box dom(Interval(-2, 2), Interval(-2, 2));
  out.push_back({"circle", sphere(Vec(0, 0), 1.0), dom});
  out.push_back({"two-circle union", min(sphere(Vec(-0.5, 0), 0.6), sphere(Vec(0.6, 0.1), 0.45)), dom});
  out.push_back({"smooth union", smooth_min(sphere(Vec(-0.5, 0), 0.6), sphere(Vec(0.6, 0.1), 0.45), 0.15), dom});
  out.push_back({"intersection", max(sphere(Vec(-0.3, 0), 0.9), sphere(Vec(0.3, 0), 0.9)), dom});
  out.push_back({"plane strip", max(plane(Vec(1, 0), 0.5), plane(Vec(-1, 0), 0.5)), dom});
  RbfData g;
  g.kernel = RbfKernel::Gaussian;
  g.centers = {Vec(0.1, 0.2), Vec(-0.4, -0.1), Vec(0.3, -0.35)};
  g.weights = {1.0, 0.8, 0.9};
  g.bandwidth = 0.45;
  g.offset = -0.55;
  out.push_back({"gaussian rbf", ImplicitField::rbf(2, g), dom});
  RbfData h;
  h.kernel = RbfKernel::Harmonic;
  h.centers = {Vec(3.0, 0.5), Vec(-2.6, -2.9)};  // poles outside dom
  h.weights = {0.4, -0.3};
  out.push_back({"harmonic perturbed circle", sphere(Vec(0, 0), 1.0) + ImplicitField::rbf(2, h), dom});
  return out;
}

std::vector<NamedField> corpus_3d() {
  std::vector<NamedField> out;
  Box dom(Interval(-2, 2), Interval(-2, 2), Interval(-2, 2));
  out.push_back({"sphere", sphere(Vec(0, 0, 0), 1.0), dom});
  out.push_back({"torus", torus(Vec(0, 0, 0), 0.8, 0.3), dom});
  out.push_back({"smooth spheres", smooth_min(sphere(Vec(-0.45, 0, 0), 0.5), sphere(Vec(0.45, 0, 0), 0.5), 0.1), dom});
  RbfData h;
  h.kernel = RbfKernel::Harmonic;
  h.centers = {Vec(2.5, 0, 0), Vec(0, -2.8, 0.5)};
  h.weights = {0.3, -0.25};
  out.push_back({"bumpy sphere", sphere(Vec(0, 0, 0), 1.0) + ImplicitField::rbf(3, h), dom});
  return out;
}

}  // namespace

TEST_CASE("point evaluation examples") {
  ImplicitField circle = sphere(Vec(0, 0), 1.0);
  CHECK(circle.eval(Vec(2, 0)) == 3.0);

  ImplicitField c1 = sphere(Vec(0, 0), 1.0);
  ImplicitField c2 = sphere(Vec(3, 0), 1.0);
  ImplicitField uni = min(c1, c2);
  Vec inside1(0.5, 0.0);
  CHECK(uni.eval(inside1) == c1.eval(inside1));
  CHECK(uni.eval(inside1) < 0.0);

  // smooth-min of two equal values v -> v - k/4
  double k = 0.1;
  ImplicitField sm = smooth_min(c1, c1, k);
  double v = c1.eval(Vec(0.2, 0.3));
  CHECK(sm.eval(Vec(0.2, 0.3)) == Catch::Approx(v - k / 4).margin(1e-15));
}

TEST_CASE("interval evaluation examples") {
  ImplicitField circle = sphere(Vec(0, 0), 1.0);
  Interval r = circle.eval(Box(Interval(0, 1), Interval(0, 1)));
  CHECK(r.lo <= -1.0);
  CHECK(r.hi >= 1.0);
  CHECK(r.lo >= -1.0 - 1e-14);
  CHECK(r.hi <= 1.0 + 1e-14);

  Vec p(0.37, -0.81);
  Interval pt = circle.eval(Box::degenerate(p));
  double exact = circle.eval(p);
  CHECK(pt.contains(exact));
  CHECK(pt.width() <= 1e-14);

  // torus interval over an enclosing box must contain 0 and enclose the
  // brute-force grid min/max
  ImplicitField t = torus(Vec(0, 0, 0), 0.8, 0.3);
  Box tb(Interval(-1.2, 1.2), Interval(-1.2, 1.2), Interval(-0.5, 0.5));
  Interval ti = t.eval(tb);
  CHECK(ti.contains_zero());
  double mn = kInf, mx = -kInf;
  for (int i = 0; i <= 24; ++i)
    for (int j = 0; j <= 24; ++j)
      for (int k = 0; k <= 24; ++k) {
        Vec q(-1.2 + 2.4 * i / 24.0, -1.2 + 2.4 * j / 24.0, -0.5 + 1.0 * k / 24.0);
        double v = t.eval(q);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
  CHECK(ti.lo <= mn);
  CHECK(ti.hi >= mx);
}

TEST_CASE("gradient evaluation examples") {
  ImplicitField circle = sphere(Vec(0, 0), 1.0);
  DualInterval g = circle.eval_grad(Box::degenerate(Vec(1, 0)));
  CHECK(g.v.contains(0.0));
  CHECK(g.v.width() <= 1e-14);
  CHECK(g.d[0].contains(2.0));
  CHECK(g.d[0].width() <= 1e-13);
  CHECK(g.d[1].contains(0.0));

  ImplicitField sph = sphere(Vec(0, 0, 0), 1.0);
  DualInterval gs = sph.eval_grad(Box(Interval(-1, 1), Interval(-1, 1), Interval(-1, 1)));
  for (int i = 0; i < 3; ++i) {
    CHECK(gs.d[i].lo <= -2.0 + 1e-12);
    CHECK(gs.d[i].hi >= 2.0 - 1e-12);
  }
}

TEST_CASE("rbf gradient matches finite differences at 100 interior points") {
  RbfData g;
  g.kernel = RbfKernel::Gaussian;
  g.centers = {Vec(0.1, 0.2), Vec(-0.4, -0.1)};
  g.weights = {1.0, -0.7};
  g.bandwidth = 0.5;
  ImplicitField f = ImplicitField::rbf(2, g);
  Box small(Interval(0.0, 0.15), Interval(-0.1, 0.05));
  DualInterval d = f.eval_grad(small);
  RandomStream rng(3, 3);
  const double h = 1e-6;
  for (int s = 0; s < 100; ++s) {
    Vec p = sample_in(small, rng);
    for (int axis = 0; axis < 2; ++axis) {
      Vec pp = p, pm = p;
      pp[axis] += h;
      pm[axis] -= h;
      double fd = (f.eval(pp) - f.eval(pm)) / (2 * h);
      double tol = 1e-4 * (1.0 + std::abs(fd));
      CHECK(d.d[axis].lo - tol <= fd);
      CHECK(fd <= d.d[axis].hi + tol);
    }
  }
}

TEST_CASE("inclusion and gradient-inclusion over the corpus") {
  RandomStream rng(41, 17);
  auto run = [&](const std::vector<NamedField>& corpus) {
    for (const auto& nf : corpus) {
      INFO(nf.name);
      for (int rep = 0; rep < 40; ++rep) {
        Box b = random_box_in(nf.domain, rng, 0.8);
        Interval iv = nf.field.eval(b);
        DualInterval dv = nf.field.eval_grad(b);
        const double h = 1e-6;
        for (int s = 0; s < 10; ++s) {
          Vec p = sample_in(b, rng);
          double v = nf.field.eval(p);
          if (!std::isfinite(v)) continue;
          REQUIRE(iv.contains(v));
          REQUIRE(dv.v.contains(v));
          for (int axis = 0; axis < b.n; ++axis) {
            Vec pp = p, pm = p;
            pp[axis] += h;
            pm[axis] -= h;
            double fd = (nf.field.eval(pp) - nf.field.eval(pm)) / (2 * h);
            double tol = 1e-4 * (1.0 + std::abs(fd));
            REQUIRE(dv.d[axis].lo - tol <= fd);
            REQUIRE(fd <= dv.d[axis].hi + tol);
          }
        }
      }
    }
  };
  run(corpus_2d());
  run(corpus_3d());
}

TEST_CASE("csg min/max equals pointwise min/max") {
  ImplicitField a = sphere(Vec(-0.5, 0), 0.6);
  ImplicitField b = sphere(Vec(0.6, 0.1), 0.45);
  ImplicitField u = min(a, b);
  ImplicitField i = max(a, b);
  RandomStream rng(8, 8);
  for (int s = 0; s < 10000; ++s) {
    Vec p(rng.uniform(-2, 2), rng.uniform(-2, 2));
    CHECK(u.eval(p) == std::min(a.eval(p), b.eval(p)));
    CHECK(i.eval(p) == std::max(a.eval(p), b.eval(p)));
  }
}

TEST_CASE("zero-set projection converges on the corpus") {
  RandomStream rng(21, 4);
  auto run = [&](const std::vector<NamedField>& corpus, int grid) {
    for (const auto& nf : corpus) {
      INFO(nf.name);
      auto samples = sample_surface_grid(nf.field, nf.domain, grid);
      REQUIRE(!samples.empty());
      int checked = 0;
      for (size_t idx = 0; idx < samples.size() && checked < 50; idx += 1 + samples.size() / 50) {
        // perturb the surface point and project back
        Vec seed = samples[idx].position;
        for (int i = 0; i < seed.n; ++i) seed[i] += rng.uniform(-0.02, 0.02);
        auto proj = project_to_surface(nf.field, seed, 1e-10);
        REQUIRE(proj.has_value());
        CHECK(std::abs(nf.field.eval(*proj)) <= 1e-10);
        ++checked;
      }
    }
  };
  run(corpus_2d(), 200);
  run(corpus_3d(), 40);
}

TEST_CASE("harmonic rbf pole yields infinite sentinel at the pole") {
  RbfData h;
  h.kernel = RbfKernel::Harmonic;
  h.centers = {Vec(0.0, 0.0, 0.0)};
  h.weights = {1.0};
  ImplicitField f = ImplicitField::rbf(3, h);
  CHECK(std::isinf(f.eval(Vec(0, 0, 0))));
  // interval evaluation over a box containing the pole is one-sided
  Interval iv = f.eval(Box(Interval(-0.1, 0.1), Interval(-0.1, 0.1), Interval(-0.1, 0.1)));
  CHECK(iv.hi == kInf);
  CHECK(iv.lo > 0.0);
}
