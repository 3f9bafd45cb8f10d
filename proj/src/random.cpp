#include "ews/random.hpp"

#include <cmath>

namespace ews {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
} // namespace

Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

CVector complex_gaussian(Rng &rng, std::size_t count) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(count);
  const double s = 1.0 / std::sqrt(2.0);
  for (auto &x : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    x = cplx(re * s, im * s);
  }
  return v;
}

CVector haar_vector(Rng &rng, std::size_t dim) {
  return normalized(complex_gaussian(rng, dim));
}

Matrix haar_unitary(Rng &rng, std::size_t dim) {
  const CVector g = complex_gaussian(rng, dim * dim);
  Matrix q(dim, dim);
  // Modified Gram-Schmidt with one re-orthogonalization pass. R_jj = ||.|| > 0,
  // which is the phase convention that makes Q Haar distributed.
  for (std::size_t j = 0; j < dim; ++j) {
    CVector col(dim);
    for (std::size_t i = 0; i < dim; ++i) col[i] = g[i * dim + j];
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        const CVector qk = q.column(k);
        const cplx c = inner(qk, col);
        for (std::size_t i = 0; i < dim; ++i) col[i] -= c * qk[i];
      }
    q.set_column(j, normalized(col));
  }
  return q;
}

} // namespace ews
