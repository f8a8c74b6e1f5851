#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace fhbeam {

// Deterministic random stream. Every random draw in the library flows through
// this wrapper so that a seed pins the generated sequence exactly; the raw
// engine output of std::mt19937_64 is fully specified by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Standard normal, Box-Muller with one cached deviate.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Circularly-symmetric complex Gaussian with unit variance, CN(0,1).
  std::complex<double> cgaussian() {
    constexpr double half = std::numbers::sqrt2 / 2.0;
    return {gaussian() * half, gaussian() * half};
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fhbeam
