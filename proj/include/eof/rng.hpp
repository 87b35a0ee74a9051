// Seeded randomness helpers. Every random draw in the library flows through a
// std::mt19937_64 whose seed is derived deterministically from a master seed
// and a stream index, so runs are reproducible and independent streams never
// share state.
#pragma once

#include <random>

#include "eof/types.hpp"

namespace eof {

// splitmix64 mix of (master, stream) into an independent engine seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// iid standard complex Gaussian entries, filled row-major, real part drawn
// before imaginary part. The fill order is part of the reproducibility
// contract.
inline Matrix random_gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(i, j) = Complex(re, im);
    }
  return out;
}

// GUE-type random Hermitian matrix, unnormalized.
inline Matrix random_hermitian(int n, std::mt19937_64& rng) {
  const Matrix a = random_gaussian_matrix(n, n, rng);
  return ((a + a.adjoint()) * 0.5).eval();
}

// Random Hermitian direction with unit Frobenius norm.
inline Matrix random_hermitian_unit(int n, std::mt19937_64& rng) {
  Matrix h = random_hermitian(n, rng);
  const double norm = h.norm();
  if (norm > 0.0) h /= norm;
  return h;
}

}  // namespace eof
