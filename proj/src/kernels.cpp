#include "opalg/kernels.hpp"

#include <cmath>

#include <Eigen/SparseCore>

namespace opalg::kernels {

Matrix StructureConstants::left_multiplication(const Vector& coeffs) const {
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t l = 0; l < dim; ++l) {
    const Complex w = coeffs(static_cast<Eigen::Index>(l));
    if (w == Complex(0.0)) continue;
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t k = 0; k < dim; ++k)
        out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) += w * (*this)(l, j, k);
  }
  return out;
}

namespace {

// Columns = vectorized basis matrices.
Matrix stack_basis(std::span<const Matrix> basis) {
  if (basis.empty()) return Matrix(0, 0);
  const Eigen::Index len = basis.front().size();
  Matrix out(len, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    out.col(static_cast<Eigen::Index>(i)) = basis[i].reshaped();
  return out;
}

void fill_star(std::span<const Matrix> basis, const Matrix& stacked, StructureConstants& sc) {
  const std::size_t d = basis.size();
  sc.star.assign(d * d, Complex(0.0));
  double worst = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const Matrix ad = basis[i].adjoint();
    const Vector v = ad.reshaped();
    const Vector c = stacked.adjoint() * v;
    for (std::size_t k = 0; k < d; ++k) sc.star[i * d + k] = c(static_cast<Eigen::Index>(k));
    worst = std::max(worst, (v - stacked * c).norm());
  }
  sc.star_residual = worst;
}

using Sparse = Eigen::SparseMatrix<Complex>;

// Bases whose matrices are mostly exact zeros (group algebras, crossed
// products, block-diagonal algebras) go through sparse products.
bool mostly_zero(std::span<const Matrix> basis) {
  std::size_t nonzero = 0, total = 0;
  for (const Matrix& b : basis) {
    total += static_cast<std::size_t>(b.size());
    for (Eigen::Index k = 0; k < b.size(); ++k) nonzero += b.data()[k] != Complex(0.0);
  }
  return total > 0 && nonzero * 10 <= total;
}

struct SparseBasis {
  std::vector<Sparse> mats;  // each basis matrix
  Sparse side_by_side;       // N x (N d), block j = b_j
  Sparse stacked;            // N^2 x d, column j = vec(b_j)
};

SparseBasis make_sparse(std::span<const Matrix> basis) {
  SparseBasis sb;
  const std::size_t d = basis.size();
  const Eigen::Index n = basis.front().rows();
  std::vector<Eigen::Triplet<Complex>> wide, tall;
  for (std::size_t j = 0; j < d; ++j) {
    sb.mats.push_back(basis[j].sparseView(Complex(1.0), 0.0));
    const auto ji = static_cast<Eigen::Index>(j);
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r) {
        const Complex v = basis[j](r, c);
        if (v == Complex(0.0)) continue;
        wide.emplace_back(r, ji * n + c, v);
        tall.emplace_back(c * n + r, ji, v);
      }
  }
  sb.side_by_side.resize(n, n * static_cast<Eigen::Index>(d));
  sb.side_by_side.setFromTriplets(wide.begin(), wide.end());
  sb.stacked.resize(n * n, static_cast<Eigen::Index>(d));
  sb.stacked.setFromTriplets(tall.begin(), tall.end());
  return sb;
}

// Row i of the structure constants: coefficients of b_i b_j (column j) and
// the worst residual of those products outside the span.
double sparse_row(const SparseBasis& sb, std::size_t i, Eigen::Index n, Matrix& coeffs) {
  const Sparse wide = sb.mats[i] * sb.side_by_side;  // N x (N d)
  const auto d = sb.stacked.cols();
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(wide.nonZeros()));
  for (Eigen::Index c = 0; c < wide.outerSize(); ++c)
    for (Sparse::InnerIterator it(wide, c); it; ++it) trip.emplace_back((c % n) * n + it.row(), c / n, it.value());
  Sparse products(n * n, d);
  products.setFromTriplets(trip.begin(), trip.end());
  coeffs = Matrix(Sparse(sb.stacked.adjoint()) * products);
  const Sparse rest = products - sb.stacked * Sparse(coeffs.sparseView(Complex(1.0), 0.0));
  double worst = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) worst = std::max(worst, rest.col(j).norm());
  return worst;
}

}  // namespace

namespace serial {

StructureConstants structure_constants(std::span<const Matrix> basis) {
  StructureConstants sc;
  const std::size_t d = basis.size();
  sc.dim = d;
  sc.product.assign(d * d * d, Complex(0.0));
  double worst = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const Matrix p = basis[i] * basis[j];
      Matrix rest = p;
      for (std::size_t k = 0; k < d; ++k) {
        const Complex c = hs_inner(basis[k], p);
        sc.product[(i * d + j) * d + k] = c;
        rest -= c * basis[k];
      }
      worst = std::max(worst, rest.norm());
    }
  }
  sc.product_residual = worst;
  fill_star(basis, stack_basis(basis), sc);
  return sc;
}

double closure_residual(std::span<const Matrix> basis) {
  const StructureConstants sc = structure_constants(basis);
  return std::max(sc.product_residual, sc.star_residual);
}

std::vector<Matrix> pairwise_products(std::span<const Matrix> lhs, std::span<const Matrix> rhs) {
  std::vector<Matrix> out;
  out.reserve(lhs.size() * rhs.size());
  for (const Matrix& a : lhs)
    for (const Matrix& b : rhs) out.push_back(a * b);
  return out;
}

}  // namespace serial

namespace parallel {

StructureConstants structure_constants(std::span<const Matrix> basis) {
  StructureConstants sc;
  const std::size_t d = basis.size();
  sc.dim = d;
  sc.product.assign(d * d * d, Complex(0.0));
  if (d == 0) return sc;

  const Matrix stacked = stack_basis(basis);
  const Matrix stacked_adj = stacked.adjoint();
  const Eigen::Index len = stacked.rows(), n = basis.front().rows();
  const bool sparse = mostly_zero(basis);
  const SparseBasis sb = sparse ? make_sparse(basis) : SparseBasis{};
  // All right factors side by side, so b_i [b_1 ... b_d] is one product.
  Matrix side_by_side;
  if (!sparse) {
    side_by_side.resize(n, n * static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) side_by_side.middleCols(static_cast<Eigen::Index>(j) * n, n) = basis[j];
  }
  std::vector<double> worst(d, 0.0);

  const auto count = static_cast<long long>(d);
#pragma omp parallel for schedule(dynamic)
  for (long long ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    Matrix coeffs;  // (k, j)
    if (sparse) {
      worst[i] = sparse_row(sb, i, n, coeffs);
    } else {
      const Matrix wide = basis[i] * side_by_side;
      const auto products = wide.reshaped(len, static_cast<Eigen::Index>(d));
      coeffs = stacked_adj * products;
      worst[i] = (products - stacked * coeffs).colwise().norm().maxCoeff();
    }
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        sc.product[(i * d + j) * d + k] = coeffs(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
  }
  sc.product_residual = *std::max_element(worst.begin(), worst.end());
  fill_star(basis, stacked, sc);
  return sc;
}

double closure_residual(std::span<const Matrix> basis) {
  const std::size_t d = basis.size();
  if (d == 0) return 0.0;
  if (mostly_zero(basis)) {
    const StructureConstants sc = structure_constants(basis);
    return std::max(sc.product_residual, sc.star_residual);
  }
  const Matrix stacked = stack_basis(basis);
  const Matrix stacked_adj = stacked.adjoint();
  const Eigen::Index len = stacked.rows();
  std::vector<double> worst(d, 0.0);

  const auto count = static_cast<long long>(d);
#pragma omp parallel for schedule(dynamic)
  for (long long ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    Matrix products(len, static_cast<Eigen::Index>(d + 1));
    for (std::size_t j = 0; j < d; ++j)
      products.col(static_cast<Eigen::Index>(j)) = (basis[i] * basis[j]).reshaped();
    products.col(static_cast<Eigen::Index>(d)) = Matrix(basis[i].adjoint()).reshaped();
    const Matrix rest = products - stacked * (stacked_adj * products);
    worst[i] = rest.colwise().norm().maxCoeff();
  }
  return *std::max_element(worst.begin(), worst.end());
}

std::vector<Matrix> pairwise_products(std::span<const Matrix> lhs, std::span<const Matrix> rhs) {
  std::vector<Matrix> out(lhs.size() * rhs.size());
  const auto count = static_cast<long long>(out.size());
  const std::size_t m = rhs.size();
#pragma omp parallel for schedule(static)
  for (long long idx = 0; idx < count; ++idx) {
    const auto k = static_cast<std::size_t>(idx);
    out[k] = lhs[k / m] * rhs[k % m];
  }
  return out;
}

}  // namespace parallel

}  // namespace opalg::kernels
