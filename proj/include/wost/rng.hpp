#pragma once

// Splittable deterministic random streams. Each stream is a splitmix64
// sequence whose start state and (odd) increment are both derived from
// (seed, stream id), so per-walk streams depend only on their key and never
// on scheduling. Samplers are hand-rolled to keep results byte-identical
// across standard libraries.

#include <cmath>
#include <cstdint>

#include "wost/vec.hpp"

namespace wost {

namespace detail {
inline uint64_t mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace detail

class RandomStream {
 public:
  RandomStream() : RandomStream(0, 0) {}
  RandomStream(uint64_t seed, uint64_t stream) {
    state_ = detail::mix64(seed ^ detail::mix64(stream));
    gamma_ = detail::mix64(detail::mix64(seed) + stream) | 1ull;
  }

  uint64_t next_u64() {
    state_ += gamma_;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform direction on the unit circle / sphere.
  Vec unit_direction(int dim) {
    if (dim == 2) {
      double a = 2.0 * M_PI * uniform();
      return Vec(std::cos(a), std::sin(a));
    }
    double z = 1.0 - 2.0 * uniform();
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double a = 2.0 * M_PI * uniform();
    return Vec(r * std::cos(a), r * std::sin(a), z);
  }

  // UniformRandomBitGenerator interface.
  using result_type = uint64_t;
  static constexpr uint64_t min() { return 0; }
  static constexpr uint64_t max() { return ~0ull; }
  uint64_t operator()() { return next_u64(); }

 private:
  uint64_t state_;
  uint64_t gamma_;
};

}  // namespace wost
