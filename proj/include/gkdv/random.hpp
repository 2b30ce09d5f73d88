#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace gkdv {

// 64-bit linear congruential generator with Knuth's MMIX constants:
//   state <- 6364136223846793005 * state + 1442695040888963407  (mod 2^64)
// Doubles use the top 53 bits; normals come from Box-Muller pairs.
class SeededRng {
 public:
  using Engine = std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL, 1442695040888963407ULL, 0ULL>;

  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  Engine engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gkdv
