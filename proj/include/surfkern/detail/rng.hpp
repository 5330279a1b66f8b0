#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "surfkern/types.hpp"

namespace surfkern::detail {

/// SplitMix64 mixing step; decorrelates per-item streams from one user seed.
inline std::uint64_t splitmix64(std::uint64_t state) {
  std::uint64_t z = state + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Deterministic uniform source. Doubles are derived from the raw 64-bit
/// stream directly, so the sequence does not depend on the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform in [0, 1).
  Real uniform() { return static_cast<Real>(engine_() >> 11) * 0x1.0p-53; }

  Real uniform(Real lo, Real hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform in {0, ..., n-1}.
  Index index(Index n) {
    const Index i = static_cast<Index>(uniform() * static_cast<Real>(n));
    return std::min(i, n - 1);
  }

 private:
  std::mt19937_64 engine_;
};

/// Uniform direction on the unit circle / sphere.
template <int Dim>
Vec<Dim> unit_direction(Rng& rng);

template <>
inline Vec<2> unit_direction<2>(Rng& rng) {
  const Real angle = 2.0 * std::numbers::pi * rng.uniform();
  return {std::cos(angle), std::sin(angle)};
}

template <>
inline Vec<3> unit_direction<3>(Rng& rng) {
  const Real z = rng.uniform(-1.0, 1.0);
  const Real phi = 2.0 * std::numbers::pi * rng.uniform();
  const Real rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {rho * std::cos(phi), rho * std::sin(phi), z};
}

}  // namespace surfkern::detail
