#pragma once

// Output artifacts: CSV fields, 8-bit binary PGM images, run manifests.
// Doubles are printed with %.17g so files round-trip exactly and reruns with
// the same parameters are byte-identical.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wost/solver.hpp"

namespace wost {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Row-major field CSV: x,y[,z],estimate,std_error,n; absent points write nan
// with n=0.
inline std::string field_csv(const std::vector<GridPoint>& grid, int dim) {
  std::string s = dim == 3 ? "x,y,z,estimate,std_error,n\n" : "x,y,estimate,std_error,n\n";
  for (const GridPoint& gp : grid) {
    for (int i = 0; i < dim; ++i) s += format_double(gp.position[i]) + ",";
    if (gp.inside) {
      s += format_double(gp.mean) + "," + format_double(gp.std_error) + "," +
           std::to_string(gp.n_walks);
    } else {
      s += "nan,nan,0";
    }
    s += "\n";
  }
  return s;
}

struct ImageNormalization {
  double min_value = 0.0;
  double max_value = 0.0;
  bool any_finite = false;
};

// Binary 8-bit PGM of a 2D grid (nx fastest in the grid vector, top row
// first in the image). Values are normalized over the finite (inside)
// estimates; absent points render black. The normalization bounds go into
// the run manifest.
inline std::string grid_pgm(const std::vector<GridPoint>& grid, int nx, int ny,
                            ImageNormalization& norm) {
  norm = ImageNormalization{};
  for (const GridPoint& gp : grid) {
    if (!gp.inside) continue;
    if (!norm.any_finite) {
      norm.min_value = norm.max_value = gp.mean;
      norm.any_finite = true;
    } else {
      norm.min_value = std::min(norm.min_value, gp.mean);
      norm.max_value = std::max(norm.max_value, gp.mean);
    }
  }
  double span = norm.max_value - norm.min_value;
  std::string s = "P5\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
  s.reserve(s.size() + static_cast<size_t>(nx) * ny);
  for (int iy = ny - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const GridPoint& gp = grid[static_cast<size_t>(iy) * nx + ix];
      unsigned char px = 0;
      if (gp.inside && norm.any_finite)
        px = span > 0.0
                 ? static_cast<unsigned char>(255.0 * (gp.mean - norm.min_value) / span + 0.5)
                 : 128;
      s.push_back(static_cast<char>(px));
    }
  }
  return s;
}

// Run manifest: every CLI output is accompanied by one, recording the scene,
// subcommand, full parameter set, seed, version and the hash of each output
// so a rerun can be checked byte-for-byte.
struct RunManifest {
  nlohmann::json doc;

  RunManifest(const std::string& tool_version, const std::string& subcommand) {
    doc["tool"] = "wost";
    doc["version"] = tool_version;
    doc["subcommand"] = subcommand;
    doc["outputs"] = nlohmann::json::array();
  }

  void set_scene(const std::string& path, const std::string& bytes) {
    doc["scene"] = path;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    doc["scene_fnv1a64"] = buf;
  }

  void add_param(const std::string& key, const nlohmann::json& value) { doc["params"][key] = value; }

  void add_output(const std::string& path, const std::string& bytes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    doc["outputs"].push_back({{"path", path}, {"fnv1a64", buf}, {"bytes", bytes.size()}});
  }

  void set_wall_clock_ms(double ms) { doc["wall_clock_ms"] = ms; }

  std::string dump() const { return doc.dump(2) + "\n"; }
};

}  // namespace wost
