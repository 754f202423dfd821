#pragma once

// Seeded random objects for property tests. Every case index maps to its own
// generator so a failing case can be replayed alone.

#include <cstdint>
#include <functional>
#include <random>

#include "cvwit/fock.hpp"

namespace cvwit::testing {

inline std::mt19937_64 rng_for(std::uint64_t seed, int case_index) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(case_index)};
  return std::mt19937_64(seq);
}

inline Complex gauss_complex(std::mt19937_64& g, double sd = 1.0) {
  std::normal_distribution<double> n(0.0, sd);
  const double re = n(g);
  const double im = n(g);
  return {re, im};
}

inline Vector random_vector(std::mt19937_64& g, int dim) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = gauss_complex(g);
  return v / v.norm();
}

inline PureState random_pure(std::mt19937_64& g, int dim) { return PureState(random_vector(g, dim)); }

/// Mixture of `rank` Haar-ish vectors with Dirichlet-like weights.
inline DensityMatrix random_density(std::mt19937_64& g, int dim, int rank) {
  std::gamma_distribution<double> w(1.0, 1.0);
  Matrix m = Matrix::Zero(dim, dim);
  double total = 0.0;
  for (int k = 0; k < rank; ++k) {
    const Vector v = random_vector(g, dim);
    const double wk = w(g);
    m += wk * v * v.adjoint();
    total += wk;
  }
  return DensityMatrix(m / total);
}

/// Hermitian matrix with spectrum drawn uniformly from [lo, hi].
inline Matrix random_hermitian(std::mt19937_64& g, int dim, double lo, double hi) {
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = gauss_complex(g);
  const Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix q = qr.householderQ();
  std::uniform_real_distribution<double> u(lo, hi);
  RealVector d(dim);
  for (int i = 0; i < dim; ++i) d(i) = u(g);
  return q * d.cast<Complex>().asDiagonal() * q.adjoint();
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline int uniform_int(std::mt19937_64& g, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(g);
}

/// Runs body(rng, case_index) for every case.
inline void for_all(int cases, std::uint64_t seed, const std::function<void(std::mt19937_64&, int)>& body) {
  for (int i = 0; i < cases; ++i) {
    auto g = rng_for(seed, i);
    body(g, i);
  }
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace cvwit::testing
