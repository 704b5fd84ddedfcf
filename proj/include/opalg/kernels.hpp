#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP version (namespace
// `parallel`) and a plain serial reference (namespace `serial`) that the tests
// compare against. Parallel kernels write into per-index slots and reduce with
// max only, so results do not depend on the schedule or the thread count.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "opalg/matcore.hpp"

namespace opalg::kernels {

/// Multiplication and adjoint tables of an orthonormal (Hilbert-Schmidt) basis.
struct StructureConstants {
  std::size_t dim = 0;
  std::vector<Complex> product;  // product[(i*dim + j)*dim + k] = <b_k, b_i b_j>
  std::vector<Complex> star;     // star[i*dim + k] = <b_k, b_i^*>
  double product_residual = 0;   // max_ij ||b_i b_j - sum_k c_ijk b_k||_F
  double star_residual = 0;

  Complex operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return product[(i * dim + j) * dim + k];
  }
  /// Matrix of left multiplication by sum_l coeffs_l b_l, acting on coordinates.
  Matrix left_multiplication(const Vector& coeffs) const;
};

namespace serial {

StructureConstants structure_constants(std::span<const Matrix> basis);
/// max(product residual, adjoint residual) of an orthonormal basis, without
/// storing the structure constants.
double closure_residual(std::span<const Matrix> basis);
std::vector<Matrix> pairwise_products(std::span<const Matrix> lhs, std::span<const Matrix> rhs);

template <class F>
double max_over(std::size_t n, F&& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, static_cast<double>(f(i)));
  return worst;
}

}  // namespace serial

namespace parallel {

StructureConstants structure_constants(std::span<const Matrix> basis);
double closure_residual(std::span<const Matrix> basis);
std::vector<Matrix> pairwise_products(std::span<const Matrix> lhs, std::span<const Matrix> rhs);

template <class F>
double max_over(std::size_t n, F&& f) {
  double worst = 0.0;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for reduction(max : worst) schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    worst = std::max(worst, static_cast<double>(f(static_cast<std::size_t>(i))));
  }
  return worst;
}

}  // namespace parallel

using parallel::closure_residual;
using parallel::max_over;
using parallel::pairwise_products;
using parallel::structure_constants;

}  // namespace opalg::kernels
