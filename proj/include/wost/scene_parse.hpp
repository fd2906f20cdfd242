#pragma once

// Scene description files: JSON documents with nested field expressions over
// named primitives. The grammar is documented in docs/scene-format.md; the
// parse is deterministic (same bytes, same Scene) and validates eagerly:
// dimensions, domain box, epsilon shell, harmonic RBF pole exclusion,
// sampled boundary regularity (nonvanishing gradient on the zero set) and
// sampled positivity of the Robin coefficient on the reflecting boundary.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wost/oracle.hpp"
#include "wost/scene.hpp"

namespace wost {

namespace detail {

using nlohmann::json;

inline SceneError parse_error(const std::string& path, const std::string& what) {
  return SceneError("scene parse error at " + (path.empty() ? "<root>" : path) + ": " + what);
}

inline Vec parse_vec(const json& j, int dim, const std::string& path) {
  if (!j.is_array() || j.size() != static_cast<size_t>(dim))
    throw parse_error(path, "expected an array of " + std::to_string(dim) + " numbers");
  Vec v = Vec::zero(dim);
  for (int i = 0; i < dim; ++i) {
    if (!j[i].is_number()) throw parse_error(path, "expected numeric components");
    v[i] = j[i].get<double>();
  }
  return v;
}

inline ImplicitField parse_expr(const json& j, int dim, const std::string& path);

inline ImplicitField fold(const json& args, int dim, const std::string& path,
                          ImplicitField (*op)(const ImplicitField&, const ImplicitField&)) {
  if (!args.is_array() || args.size() < 2)
    throw parse_error(path, "expected at least two operands in \"args\"");
  ImplicitField acc = parse_expr(args[0], dim, path + "/args/0");
  for (size_t i = 1; i < args.size(); ++i)
    acc = op(acc, parse_expr(args[i], dim, path + "/args/" + std::to_string(i)));
  return acc;
}

inline ImplicitField parse_expr(const json& j, int dim, const std::string& path) {
  if (j.is_number()) return ImplicitField::constant(dim, j.get<double>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "x") return ImplicitField::coordinate(dim, 0);
    if (s == "y") return ImplicitField::coordinate(dim, 1);
    if (s == "z" && dim == 3) return ImplicitField::coordinate(dim, 2);
    throw parse_error(path, "unknown coordinate \"" + s + "\" for dimension " + std::to_string(dim));
  }
  if (!j.is_object() || !j.contains("op"))
    throw parse_error(path, "expected a number, coordinate string, or {\"op\": ...} object");
  const std::string op = j.at("op").get<std::string>();
  auto arg = [&](const char* key, size_t idx) -> const json& {
    if (j.contains(key)) return j.at(key);
    if (j.contains("args") && j.at("args").is_array() && j.at("args").size() > idx)
      return j.at("args")[idx];
    throw parse_error(path, "operator \"" + op + "\" is missing operand \"" + key + "\"");
  };

  if (op == "const") return ImplicitField::constant(dim, j.at("value").get<double>());
  if (op == "coord") {
    int axis = j.at("axis").get<int>();
    if (axis < 0 || axis >= dim) throw parse_error(path, "coord axis out of range");
    return ImplicitField::coordinate(dim, axis);
  }
  if (op == "add") return fold(j.at("args"), dim, path, +[](const ImplicitField& a, const ImplicitField& b) { return a + b; });
  if (op == "sub")
    return parse_expr(arg("a", 0), dim, path + "/a") - parse_expr(arg("b", 1), dim, path + "/b");
  if (op == "mul") return fold(j.at("args"), dim, path, +[](const ImplicitField& a, const ImplicitField& b) { return a * b; });
  if (op == "div")
    return parse_expr(arg("a", 0), dim, path + "/a") / parse_expr(arg("b", 1), dim, path + "/b");
  if (op == "neg") return -parse_expr(arg("arg", 0), dim, path + "/arg");
  if (op == "exp") return exp(parse_expr(arg("arg", 0), dim, path + "/arg"));
  if (op == "log") return log(parse_expr(arg("arg", 0), dim, path + "/arg"));
  if (op == "sqrt") return sqrt(parse_expr(arg("arg", 0), dim, path + "/arg"));
  if (op == "sqr") return sqr(parse_expr(arg("arg", 0), dim, path + "/arg"));
  if (op == "abs") return abs(parse_expr(arg("arg", 0), dim, path + "/arg"));
  if (op == "min" || op == "union")
    return fold(j.at("args"), dim, path, +[](const ImplicitField& a, const ImplicitField& b) { return min(a, b); });
  if (op == "max" || op == "intersect")
    return fold(j.at("args"), dim, path, +[](const ImplicitField& a, const ImplicitField& b) { return max(a, b); });
  if (op == "smooth_min" || op == "smooth_union") {
    double k = j.at("k").get<double>();
    if (!(k > 0.0)) throw parse_error(path, "smooth blend k must be positive");
    const json& args = j.at("args");
    if (!args.is_array() || args.size() < 2) throw parse_error(path, "expected >= 2 args");
    ImplicitField acc = parse_expr(args[0], dim, path + "/args/0");
    for (size_t i = 1; i < args.size(); ++i)
      acc = smooth_min(acc, parse_expr(args[i], dim, path + "/args/" + std::to_string(i)), k);
    return acc;
  }
  if (op == "circle" || op == "sphere") {
    Vec c = parse_vec(j.at("center"), dim, path + "/center");
    double r = j.at("radius").get<double>();
    if (!(r > 0.0)) throw parse_error(path, "radius must be positive");
    return sphere(c, r);
  }
  if (op == "plane") {
    Vec nrm = parse_vec(j.at("normal"), dim, path + "/normal");
    return plane(nrm, j.at("offset").get<double>());
  }
  if (op == "torus") {
    if (dim != 3) throw parse_error(path, "torus requires dimension 3");
    Vec c = parse_vec(j.at("center"), dim, path + "/center");
    return torus(c, j.at("major").get<double>(), j.at("minor").get<double>());
  }
  if (op == "dot") {
    Vec origin = parse_vec(j.at("origin"), dim, path + "/origin");
    Vec w = parse_vec(j.at("vector"), dim, path + "/vector");
    return ImplicitField::linear_form(origin, w);
  }
  if (op == "norm") {
    // ||p - c||: sphere(c,1) + 1 is exactly ||p - c||^2.
    Vec c = parse_vec(j.at("center"), dim, path + "/center");
    return sqrt(sphere(c, 1.0) + 1.0);
  }
  if (op == "rbf") {
    RbfData data;
    const std::string kernel = j.at("kernel").get<std::string>();
    if (kernel == "gaussian")
      data.kernel = RbfKernel::Gaussian;
    else if (kernel == "harmonic")
      data.kernel = RbfKernel::Harmonic;
    else
      throw parse_error(path, "unknown rbf kernel \"" + kernel + "\"");
    const json& centers = j.at("centers");
    const json& weights = j.at("weights");
    if (!centers.is_array() || !weights.is_array() || centers.size() != weights.size() ||
        centers.empty())
      throw parse_error(path, "rbf centers/weights must be equal-length non-empty arrays");
    for (size_t i = 0; i < centers.size(); ++i) {
      data.centers.push_back(parse_vec(centers[i], dim, path + "/centers/" + std::to_string(i)));
      data.weights.push_back(weights[i].get<double>());
    }
    if (data.kernel == RbfKernel::Gaussian) {
      data.bandwidth = j.at("bandwidth").get<double>();
      if (!(data.bandwidth > 0.0)) throw parse_error(path, "gaussian bandwidth must be positive");
    }
    if (j.contains("offset")) data.offset = j.at("offset").get<double>();
    return ImplicitField::rbf(dim, std::move(data));
  }
  throw parse_error(path, "unknown operator \"" + op + "\"");
}

inline int line_of_offset(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

inline void check_harmonic_poles(const ImplicitField& f, const Box& domain,
                                 const std::string& what) {
  for (const RbfData& r : f.rbf_data()) {
    if (r.kernel != RbfKernel::Harmonic) continue;
    for (const Vec& c : r.centers) {
      if (domain.contains(c))
        throw SceneError("scene validation: harmonic RBF pole of " + what +
                         " lies inside the domain box; poles must be strictly outside");
    }
  }
}

}  // namespace detail

// Sampled checks on a declared boundary field: the zero set must exist inside
// the domain box and the gradient must stay away from zero on it.
inline std::vector<SurfaceSample> validate_boundary_field(const ImplicitField& f, const Box& domain,
                                                          const std::string& what,
                                                          double grad_min = 1e-6) {
  int n = f.dimension() == 2 ? 256 : 48;
  std::vector<SurfaceSample> samples = sample_surface_grid(f, domain, n);
  if (samples.empty())
    throw SceneError("scene validation: " + what + " has no zero set inside the domain box");
  for (const auto& s : samples) {
    if (!(s.gradient.norm() >= grad_min))
      throw SceneError("scene validation: " + what +
                       " violates the regularity condition (|grad| < " +
                       std::to_string(grad_min) + " at a sampled surface point)");
  }
  return samples;
}

inline Scene parse_scene(const std::string& text, const std::string& origin = "<memory>") {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SceneError(origin + ": JSON parse error near line " +
                     std::to_string(detail::line_of_offset(text, e.byte)) + ": " + e.what());
  }

  try {
    Scene scene;
    scene.name = doc.value("name", origin);
    scene.dimension = doc.at("dimension").get<int>();
    if (scene.dimension != 2 && scene.dimension != 3)
      throw SceneError("scene validation: dimension must be 2 or 3");

    const json& dom = doc.at("domain");
    Vec lo = detail::parse_vec(dom.at("min"), scene.dimension, "/domain/min");
    Vec hi = detail::parse_vec(dom.at("max"), scene.dimension, "/domain/max");
    scene.domain_box.n = scene.dimension;
    for (int i = 0; i < scene.dimension; ++i) {
      if (!(lo[i] < hi[i]))
        throw SceneError("scene validation: domain box must have positive width in every dimension");
      scene.domain_box.dims[i] = Interval(lo[i], hi[i]);
    }

    if (!doc.contains("epsilon_shell"))
      throw SceneError("scene validation: missing epsilon_shell");
    scene.epsilon_shell = doc.at("epsilon_shell").get<double>();
    if (!(scene.epsilon_shell > 0.0))
      throw SceneError("scene validation: epsilon_shell must be positive");

    if (doc.contains("dirichlet")) {
      const json& dj = doc.at("dirichlet");
      scene.dirichlet_field = detail::parse_expr(dj.at("field"), scene.dimension, "/dirichlet/field");
      if (dj.contains("data"))
        scene.dirichlet_data = detail::parse_expr(dj.at("data"), scene.dimension, "/dirichlet/data");
    }
    if (doc.contains("robin")) {
      const json& rj = doc.at("robin");
      scene.robin_field = detail::parse_expr(rj.at("field"), scene.dimension, "/robin/field");
      if (rj.contains("mu")) {
        RobinCoefficientField mu;
        if (rj.at("mu").is_number()) {
          mu.is_constant = true;
          mu.constant_value = rj.at("mu").get<double>();
          mu.field = ImplicitField::constant(scene.dimension, mu.constant_value);
          if (mu.constant_value < 0.0)
            throw SceneError("scene validation: constant Robin coefficient must be >= 0");
        } else {
          mu.field = detail::parse_expr(rj.at("mu"), scene.dimension, "/robin/mu");
        }
        scene.mu = std::move(mu);
      }
      if (rj.contains("data"))
        scene.robin_data = detail::parse_expr(rj.at("data"), scene.dimension, "/robin/data");
    }

    if (!scene.dirichlet_field && !scene.robin_field)
      throw SceneError("scene validation: at least one of dirichlet/robin boundaries is required");

    for (const auto* f : {&scene.dirichlet_field, &scene.robin_field, &scene.dirichlet_data,
                          &scene.robin_data}) {
      if (*f) detail::check_harmonic_poles(**f, scene.domain_box, "a scene field");
    }
    if (scene.mu) detail::check_harmonic_poles(scene.mu->field, scene.domain_box, "mu");

    if (scene.dirichlet_field)
      validate_boundary_field(*scene.dirichlet_field, scene.domain_box, "the Dirichlet boundary field");
    if (scene.robin_field) {
      auto samples =
          validate_boundary_field(*scene.robin_field, scene.domain_box, "the reflecting boundary field");
      if (scene.has_robin_coefficient()) {
        for (const auto& s : samples) {
          if (!(scene.mu->eval(s.position) > 0.0))
            throw SceneError("scene validation: Robin coefficient must be positive on the "
                             "reflecting boundary (sampled violation)");
        }
      }
    }
    return scene;
  } catch (const json::exception& e) {
    throw SceneError(origin + ": malformed scene document: " + e.what());
  }
}

inline Scene load_scene_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SceneError("cannot open scene file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str(), path);
}

}  // namespace wost
