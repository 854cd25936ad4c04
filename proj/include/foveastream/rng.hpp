#ifndef FOVEASTREAM_RNG_HPP_
#define FOVEASTREAM_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace foveastream {

// Seeded random source with fixed distribution algorithms. std::*_distribution
// is implementation-defined, so uniform and normal variates are derived from
// raw mt19937_64 output here to keep seeded runs reproducible everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Standard normal via Box-Muller (cosine branch).
  double normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) {
    return mean + stddev * normal();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace foveastream

#endif  // FOVEASTREAM_RNG_HPP_
