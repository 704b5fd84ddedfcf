#pragma once

// Seeded random matrices. All randomness in the library flows through an
// explicitly seeded Rng so decompositions are reproducible.

#include <random>

#include <Eigen/QR>

#include "opalg/matcore.hpp"

namespace opalg {

using Rng = std::mt19937_64;

inline double random_real(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

inline Complex random_complex(Rng& rng) {
  const double re = random_real(rng);
  const double im = random_real(rng);
  return {re, im};
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = random_complex(rng);
  return m;
}

inline Matrix random_hermitian(Eigen::Index n, Rng& rng) {
  const Matrix x = random_matrix(n, n, rng);
  return (x + x.adjoint()) / 2.0;
}

/// Haar-ish unitary from the QR factor of a Gaussian matrix.
inline Matrix random_unitary(Eigen::Index n, Rng& rng) {
  const Matrix x = random_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(x);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

}  // namespace opalg
