#pragma once

#include "ews/linalg.hpp"

#include <cstdint>
#include <random>

namespace ews {

using Rng = std::mt19937_64;

/// Seed for sub-stream `index` of `seed` (restart i uses seed ^ i).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return seed ^ index;
}

/// Engine whose state is a splitmix64 scramble of `seed`, so nearby seeds
/// give unrelated streams.
Rng make_rng(std::uint64_t seed);

/// Entries (x + iy)/sqrt(2) with x, y standard normal.
CVector complex_gaussian(Rng &rng, std::size_t count);
/// Uniform on the unit sphere of C^dim.
CVector haar_vector(Rng &rng, std::size_t dim);
/// Haar unitary via QR of a complex Gaussian matrix, R diagonal made positive.
Matrix haar_unitary(Rng &rng, std::size_t dim);

} // namespace ews
