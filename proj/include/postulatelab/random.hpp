#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "postulatelab/types.hpp"

namespace postulatelab {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent per-trial seed streams.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix_seed(seed);
  for (auto p : path) s = mix_seed(s ^ mix_seed(p + 0x632be59bd9b4e019ULL));
  return s;
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {}) {
  return Rng(derive_seed(seed, path));
}

template <typename Real = double>
CMat<Real> ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<Real> normal(0, 1);
  CMat<Real> g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = Complex<Real>(normal(rng), normal(rng));
  return g;
}

// Haar-distributed unit vector: normalized complex Gaussian.
template <typename Real = double>
CVec<Real> haar_vector(Index dim, Rng& rng) {
  CVec<Real> v = ginibre<Real>(dim, 1, rng);
  return v / v.norm();
}

// Haar-distributed unitary via QR of a Ginibre matrix with the R-diagonal
// phases folded back into Q (Mezzadri's correction).
template <typename Real = double>
CMat<Real> haar_unitary(Index dim, Rng& rng) {
  Eigen::HouseholderQR<CMat<Real>> qr(ginibre<Real>(dim, dim, rng));
  CMat<Real> q = qr.householderQ();
  const CMat<Real>& r = qr.matrixQR();
  for (Index j = 0; j < dim; ++j) {
    const Complex<Real> d = r(j, j);
    const Real mag = std::abs(d);
    if (mag > 0) q.col(j) *= d / mag;
  }
  return q;
}

// Haar-random isometry C^rows_in -> C^rows_out (rows_out >= rows_in).
template <typename Real = double>
CMat<Real> haar_isometry(Index dim_in, Index dim_out, Rng& rng) {
  return haar_unitary<Real>(dim_out, rng).leftCols(dim_in);
}

}  // namespace postulatelab
