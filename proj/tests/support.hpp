#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "nmsim/qstate.hpp"

namespace nmsim::gen {

inline Matrix random_complex(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = cplx{g(rng), g(rng)};
  return m;
}

inline Matrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  const Matrix g = random_complex(rng, n, n);
  return 0.5 * (g + g.adjoint());
}

// Ginibre W W^dagger with W of width `rank`, unit trace; rank == n is the Hilbert-Schmidt ensemble.
inline Matrix random_density(std::mt19937_64& rng, std::size_t n, std::size_t rank) {
  const Matrix w = random_complex(rng, n, rank);
  Matrix m = w * w.adjoint();
  return cplx{1.0 / m.trace().real()} * m;
}

inline Matrix random_density(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> rank(1, n);
  return random_density(rng, n, rank(rng));
}

inline StateVector random_pure(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<cplx> a(n);
  for (auto& x : a) x = cplx{g(rng), g(rng)};
  return StateVector::normalized(std::move(a));
}

inline Matrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  return expm_hermitian(random_hermitian(rng, n), 1.0);
}

}  // namespace nmsim::gen
