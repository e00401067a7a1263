#pragma once

// Deterministic random streams. Every consumer owns its stream; seeds for
// subtasks are split off a master seed with derive_seed so that parallel
// schedules cannot change the numbers drawn.

#include <cmath>
#include <cstdint>
#include <random>

#include "growthfit/errors.hpp"

namespace growthfit {

// splitmix64 mix of a master seed and a stream id.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (sine branch unused).
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi_ * u2);
  }

  double exponential(double rate) {
    if (!(rate > 0.0)) throw Error(errc::domain, "exponential rate must be positive");
    return -std::log(uniform()) / rate;
  }

  // Gamma(shape, scale 1), Marsaglia-Tsang; the shape < 1 case boosts.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw Error(errc::domain, "gamma shape must be positive");
    if (shape < 1.0)
      return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

  double chi_square(double nu) { return 2.0 * gamma(0.5 * nu); }

 private:
  static constexpr double pi_ = 3.141592653589793238462643383279502884;
  std::mt19937_64 eng_;
};

}  // namespace growthfit
