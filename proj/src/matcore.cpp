#include "opalg/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace opalg {

Matrix adjoint(const Matrix& a) { return a.adjoint(); }

Matrix identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return Matrix::Identity(k, k);
}

std::vector<double> singular_values(const Matrix& a) {
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

void require_square(const Matrix& a, const char* operation) {
  if (a.rows() != a.cols()) {
    throw Error(operation, "NonSquare",
                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

void require_finite(const Matrix& a, const char* operation) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Complex z = a.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(operation, "NonFinite", "entry " + std::to_string(i));
    }
  }
}

namespace {

bool value_less(const Complex& x, const Complex& y) {
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

}  // namespace

std::vector<std::vector<std::size_t>> cluster_values(const std::vector<Complex>& values, double radius) {
  const std::size_t n = values.size();
  // union-find over the "within radius" graph
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= radius) parent[find(i)] = find(j);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return value_less(values[a], values[b]); });

  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::ptrdiff_t> slot(n, -1);
  for (std::size_t i : order) {
    const std::size_t root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::ptrdiff_t>(clusters.size());
      clusters.emplace_back();
    }
    clusters[static_cast<std::size_t>(slot[root])].push_back(i);
  }
  return clusters;
}

Diagonalization diagonalize_normal(const Matrix& a, const Tolerance& tol) {
  require_square(a, "diagonalize_normal");
  const Eigen::Index n = a.rows();
  if (n == 0) return {Matrix(0, 0), Vector(0)};
  Eigen::ComplexSchur<Matrix> schur(a);
  Matrix q = schur.matrixU();
  const Matrix& t = schur.matrixT();

  std::vector<Complex> vals(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = t(i, i);

  // Schur vectors are already orthonormal; within a cluster we still run a
  // QR pass so that accumulated round-off cannot tilt the eigenspace basis.
  const double radius = tol.effective(a);
  for (const auto& cluster : cluster_values(vals, radius)) {
    if (cluster.size() < 2) continue;
    Matrix block(n, static_cast<Eigen::Index>(cluster.size()));
    for (std::size_t k = 0; k < cluster.size(); ++k)
      block.col(static_cast<Eigen::Index>(k)) = q.col(static_cast<Eigen::Index>(cluster[k]));
    Eigen::HouseholderQR<Matrix> qr(block);
    Matrix thin = qr.householderQ() * Matrix::Identity(n, block.cols());
    for (std::size_t k = 0; k < cluster.size(); ++k)
      q.col(static_cast<Eigen::Index>(cluster[k])) = thin.col(static_cast<Eigen::Index>(k));
  }

  Vector ev(n);
  for (Eigen::Index i = 0; i < n; ++i) ev(i) = vals[static_cast<std::size_t>(i)];
  return {std::move(q), std::move(ev)};
}

bool is_normal(const Matrix& a, const Tolerance& tol) {
  if (a.rows() != a.cols()) return false;
  const Matrix c = a * a.adjoint() - a.adjoint() * a;
  return c.norm() <= tol.effective(a.norm() * a.norm(), static_cast<std::size_t>(a.rows()));
}

bool is_projection(const Matrix& a, const Tolerance& tol) {
  if (a.rows() != a.cols()) return false;
  const double eps = tol.effective(a);
  return (a - a.adjoint()).norm() <= eps && (a * a - a).norm() <= eps;
}

SpectrumResult spectrum(const Matrix& a, const Tolerance& tol) {
  require_square(a, "spectrum");
  require_finite(a, "spectrum");
  const Eigen::Index n = a.rows();
  SpectrumResult out;
  if (n == 0) return out;

  std::vector<Complex> vals;
  if (is_normal(a, tol)) {
    Diagonalization d = diagonalize_normal(a, tol);
    vals.assign(d.eigenvalues.data(), d.eigenvalues.data() + n);
    out.diagonalization = std::move(d);
  } else {
    Eigen::ComplexEigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
    vals.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  }
  std::sort(vals.begin(), vals.end(), value_less);

  out.residuals.reserve(vals.size());
  for (const Complex& lambda : vals) {
    Matrix shifted = a - lambda * Matrix::Identity(n, n);
    const auto sv = singular_values(shifted);
    out.residuals.push_back(sv.back());
  }
  out.eigenvalues = std::move(vals);
  return out;
}

Classification classify(const Matrix& a, const Tolerance& tol) {
  Classification c;
  if (a.rows() != a.cols()) return c;
  const auto n = static_cast<std::size_t>(a.rows());
  const Matrix id = identity(n);
  const Matrix ad = a.adjoint();
  const Matrix ada = ad * a;
  const Matrix aad = a * ad;
  const double eps = tol.effective(a);
  const double eps2 = tol.effective(a.norm() * a.norm(), n);

  c.selfadjoint = (a - ad).norm() <= eps;
  c.normal = (aad - ada).norm() <= eps2;
  c.isometry = (ada - id).norm() <= eps2;
  c.unitary = c.isometry && (aad - id).norm() <= eps2;
  c.projection = c.selfadjoint && (a * a - a).norm() <= eps;
  c.partial_isometry = is_projection(ada, tol);
  return c;
}

std::size_t numeric_rank(const Matrix& a, double threshold, double gap) {
  const auto sv = singular_values(a);
  std::size_t rank = 0;
  while (rank < sv.size() && sv[rank] > threshold) ++rank;
  if (rank > 0 && rank < sv.size()) {
    if (sv[rank - 1] - sv[rank] < gap) {
      throw Error("numeric_rank", "RankGap",
                  "kept " + std::to_string(sv[rank - 1]) + " vs dropped " + std::to_string(sv[rank]));
    }
  }
  return rank;
}

// JacobiSVD throughout: Eigen 3.4's BDCSVD misreports singular values when many
// coincide, which is the normal case for commutator systems.
Matrix null_space(const Matrix& a, double threshold) {
  const Eigen::Index cols = a.cols();
  if (a.rows() == 0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > threshold) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

Complex hs_inner(const Matrix& x, const Matrix& y) {
  return (x.conjugate().cwiseProduct(y)).sum();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace opalg
