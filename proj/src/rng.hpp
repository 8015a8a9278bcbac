#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace wpt {

// splitmix64 step; used to whiten and combine seed material.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from (base, a, b). Feeding each word
// through splitmix64 avoids correlated mt19937_64 states for nearby inputs.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0) {
  std::uint64_t s = base;
  std::uint64_t m = splitmix64(s);
  s ^= a * 0x9e3779b97f4a7c15ULL;
  m ^= splitmix64(s);
  s ^= b * 0xc2b2ae3d27d4eb4fULL;
  m ^= splitmix64(s);
  return m;
}

// Uniform double in [0, 1) from the high 53 bits; bit-stable across platforms
// (mt19937_64 output is fully specified by the standard).
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// One Box-Muller pair of independent standard normals. Hand-rolled because
// std::normal_distribution's algorithm is implementation-defined and the
// sweep output must be byte-identical everywhere.
inline void normal_pair(std::mt19937_64& gen, double& z0, double& z1) {
  const double u1 = static_cast<double>((gen() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform01(gen);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  z0 = r * std::cos(t);
  z1 = r * std::sin(t);
}

}  // namespace wpt
