#pragma once

// Seeded randomness helpers. std::mt19937_64 supplies the raw stream; the
// reductions below are implemented by hand because the standard
// distributions are implementation-defined and would break byte-identical
// reproducibility across standard libraries.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace flowtrap {

using Rng = std::mt19937_64;

// Unbiased draw from [0, n) by multiply-shift with rejection.
inline std::uint64_t bounded_rand(Rng& rng, std::uint64_t n) {
  auto wide = static_cast<unsigned __int128>(rng()) * n;
  auto low = static_cast<std::uint64_t>(wide);
  if (low < n) {
    const std::uint64_t floor = (0 - n) % n;
    while (low < floor) {
      wide = static_cast<unsigned __int128>(rng()) * n;
      low = static_cast<std::uint64_t>(wide);
    }
  }
  return static_cast<std::uint64_t>(wide >> 64);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform double in [lo, hi).
inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Standard normal draw via Box-Muller. Consumes two uniforms per call;
// simple and portable beats fast here.
inline double standard_normal(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1], keeps log finite
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace flowtrap
