#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "wost/io.hpp"
#include "wost/scene_parse.hpp"

using namespace wost;

namespace {
const std::string kSceneDir = WOST_SCENE_DIR;
}

TEST_CASE("corpus scenes parse and validate") {
  for (const char* name :
       {"disk2d_dirichlet", "disk2d_const", "annulus2d_robin", "annulus2d_neumann",
        "circle2d_robin", "blobs2d", "rbf2d", "square2d", "sphere3d_dirichlet", "sphere3d_robin",
        "blobs3d", "torus3d", "rbf3d_harmonic"}) {
    INFO(name);
    Scene s = load_scene_file(kSceneDir + "/" + name + ".json");
    CHECK((s.dimension == 2 || s.dimension == 3));
    CHECK(s.epsilon_shell > 0.0);
    CHECK(s.tolerance() == s.epsilon_shell / 10.0);
  }
}

TEST_CASE("teaser-style scene: dirichlet sphere plus smooth-union robin blob") {
  Scene s = load_scene_file(kSceneDir + "/blobs3d.json");
  CHECK(s.dimension == 3);
  REQUIRE(s.dirichlet_field.has_value());
  REQUIRE(s.robin_field.has_value());
  REQUIRE(s.mu.has_value());
  CHECK(s.mu->is_constant);
  CHECK(s.mu->constant_value == 1.0);
  // interior point between the blobs and the outer sphere
  CHECK(s.inside(Vec(0.0, 1.0, 0.0)));
  CHECK(!s.inside(Vec(0.45, 0.0, 0.0)));  // inside an obstacle
}

TEST_CASE("scene omitting both boundaries fails validation") {
  std::string text = R"({
    "dimension": 2,
    "domain": { "min": [-1, -1], "max": [1, 1] },
    "epsilon_shell": 0.001
  })";
  CHECK_THROWS_AS(parse_scene(text), SceneError);
}

TEST_CASE("negative robin coefficient fails validation") {
  std::string text = R"({
    "dimension": 2,
    "domain": { "min": [-2, -2], "max": [2, 2] },
    "epsilon_shell": 0.001,
    "robin": {
      "field": { "op": "circle", "center": [0, 0], "radius": 1 },
      "mu": -1
    }
  })";
  CHECK_THROWS_AS(parse_scene(text), SceneError);
}

TEST_CASE("expression-valued robin coefficient must be positive on the boundary") {
  std::string text = R"({
    "dimension": 2,
    "domain": { "min": [-2, -2], "max": [2, 2] },
    "epsilon_shell": 0.001,
    "robin": {
      "field": { "op": "circle", "center": [0, 0], "radius": 1 },
      "mu": { "op": "sub", "a": "x", "b": 2 }
    }
  })";
  CHECK_THROWS_WITH(parse_scene(text), Catch::Matchers::ContainsSubstring("positive"));
}

TEST_CASE("missing epsilon shell is an error") {
  std::string text = R"({
    "dimension": 2,
    "domain": { "min": [-1, -1], "max": [1, 1] },
    "dirichlet": { "field": { "op": "circle", "center": [0, 0], "radius": 0.5 } }
  })";
  CHECK_THROWS_WITH(parse_scene(text), Catch::Matchers::ContainsSubstring("epsilon_shell"));
}

TEST_CASE("unknown primitive reports its path") {
  std::string text = R"({
    "dimension": 2,
    "domain": { "min": [-1, -1], "max": [1, 1] },
    "epsilon_shell": 0.001,
    "dirichlet": { "field": { "op": "hyperboloid" } }
  })";
  CHECK_THROWS_WITH(parse_scene(text), Catch::Matchers::ContainsSubstring("hyperboloid"));
}

TEST_CASE("dimension mismatch in vectors is an error") {
  std::string text = R"({
    "dimension": 3,
    "domain": { "min": [-1, -1, -1], "max": [1, 1, 1] },
    "epsilon_shell": 0.001,
    "dirichlet": { "field": { "op": "sphere", "center": [0, 0], "radius": 0.5 } }
  })";
  CHECK_THROWS_AS(parse_scene(text), SceneError);
}

TEST_CASE("json syntax errors carry line numbers") {
  std::string text = "{\n \"dimension\": 2,\n \"oops\n}";
  try {
    parse_scene(text);
    FAIL("expected SceneError");
  } catch (const SceneError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
}

TEST_CASE("harmonic poles inside the domain box are rejected") {
  std::string text = R"({
    "dimension": 2,
    "domain": { "min": [-2, -2], "max": [2, 2] },
    "epsilon_shell": 0.001,
    "dirichlet": {
      "field": {
        "op": "add",
        "args": [
          { "op": "circle", "center": [0, 0], "radius": 1 },
          { "op": "rbf", "kernel": "harmonic", "centers": [[0.5, 0.5]], "weights": [0.2] }
        ]
      }
    }
  })";
  CHECK_THROWS_WITH(parse_scene(text), Catch::Matchers::ContainsSubstring("pole"));
}

TEST_CASE("boundary with no zero set inside the box is rejected") {
  std::string text = R"({
    "dimension": 2,
    "domain": { "min": [-1, -1], "max": [1, 1] },
    "epsilon_shell": 0.001,
    "dirichlet": { "field": { "op": "circle", "center": [10, 10], "radius": 1 } }
  })";
  CHECK_THROWS_WITH(parse_scene(text), Catch::Matchers::ContainsSubstring("zero set"));
}

TEST_CASE("deterministic parse: same bytes, same field values") {
  std::string bytes = read_file_bytes(kSceneDir + "/blobs2d.json");
  Scene a = parse_scene(bytes);
  Scene b = parse_scene(bytes);
  RandomStream rng(1, 1);
  for (int i = 0; i < 100; ++i) {
    Vec p(rng.uniform(-2, 2), rng.uniform(-2, 2));
    CHECK(a.robin_field->eval(p) == b.robin_field->eval(p));
    CHECK(a.dirichlet_field->eval(p) == b.dirichlet_field->eval(p));
    CHECK(a.mu->eval(p) == b.mu->eval(p));
  }
}

TEST_CASE("surface samples satisfy the sample invariants") {
  Scene s = load_scene_file(kSceneDir + "/blobs2d.json");
  auto samples = sample_surface_grid(*s.robin_field, s.domain_box, 128);
  REQUIRE(samples.size() > 100);
  for (const auto& smp : samples) {
    CHECK(std::abs(smp.field_value) <= 1e-9);
    CHECK(std::abs(smp.unit_normal.norm() - 1.0) <= 1e-12);
    // unit normal parallel to gradient
    double cross = smp.unit_normal[0] * smp.gradient[1] - smp.unit_normal[1] * smp.gradient[0];
    CHECK(std::abs(cross) <= 1e-9 * smp.gradient.norm());
  }
}
