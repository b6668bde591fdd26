#pragma once

#include <cstdint>
#include <random>

#include "swipt/linalg.hpp"

namespace swipt {

/// Seedable generator used for every random draw in the library.
///
/// Bits come from std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Uniforms use the top 53 bits, offset by half an ulp so they
/// lie strictly inside (0, 1). Gaussians use the Box-Muller transform,
///   z0 = sqrt(-2 ln u1) cos(2 pi u2),  z1 = sqrt(-2 ln u1) sin(2 pi u2),
/// returning z0 then z1 from each pair. Identical seeds give identical
/// streams on the same build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double gaussian();
  /// Circularly-symmetric complex normal with unit total variance.
  Complex complex_gaussian();

  /// rows x cols matrix with i.i.d. CN(0, 1) entries. Real parts for the
  /// whole matrix are drawn first (column-major), then imaginary parts.
  CMatrix complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Deterministic child seed for stream `stream` of `base` (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace swipt
