#include "opalg/ktheory.hpp"

#include <cstdlib>
#include <limits>

#include <Eigen/Eigenvalues>

namespace opalg {

Matrix idempotent_to_projection(const Matrix& e, const Tolerance& tol) {
  const char* op = "idempotent_to_projection";
  require_square(e, op);
  require_finite(e, op);
  const double eps = tol.effective(e);
  const double defect = (e * e - e).norm();
  if (defect > eps) throw Error(op, "NotIdempotent", "||e^2 - e|| = " + std::to_string(defect));
  const auto n = static_cast<std::size_t>(e.rows());
  const Matrix d = e - e.adjoint();
  const Matrix z = identity(n) - d * d;  // 1 + (e - e^*)(e^* - e)
  Eigen::SelfAdjointEigenSolver<Matrix> es(z, Eigen::EigenvaluesOnly);
  if (n > 0 && es.eigenvalues()(0) < 0.5)
    throw Error(op, "SingularZ", "smallest eigenvalue " + std::to_string(es.eigenvalues()(0)));
  // z is self-adjoint, so e e^* z^{-1} = (z^{-1} e e^*)^*.
  const Matrix eet = e * e.adjoint();
  return z.ldlt().solve(eet).adjoint();
}

std::vector<BlockInfo> blocks_of(const FDCAlgebra& a, const DecomposeOptions& opts, const Tolerance& tol) {
  if (a.decomposition()) return *a.decomposition();
  return block_decompose(a, opts, tol);
}

IntVector dimension_vector(const FDCAlgebra& a, const std::vector<BlockInfo>& blocks, const Matrix& p,
                           const Tolerance& tol) {
  const char* op = "dimension_vector";
  require_square(p, op);
  const std::size_t n = a.ambient_dim();
  const auto rows = static_cast<std::size_t>(p.rows());
  if (n == 0 || rows % n != 0)
    throw Error(op, "DimensionMismatch", "size " + std::to_string(rows) + " is not a multiple of " + std::to_string(n));
  const std::size_t k = rows / n;
  const double eps = tol.effective(p);
  if ((p * p - p).norm() > eps || (p - p.adjoint()).norm() > eps) throw Error(op, "NotProjection", "");
  const auto ni = static_cast<Eigen::Index>(n);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c) {
      const double off = a.membership_residual(p.block(static_cast<Eigen::Index>(r) * ni, static_cast<Eigen::Index>(c) * ni, ni, ni));
      if (off > eps) throw Error(op, "NotMember", "entry (" + std::to_string(r) + "," + std::to_string(c) + ") off by " + std::to_string(off));
    }
  IntVector out(static_cast<Eigen::Index>(blocks.size()));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Matrix z = kron(identity(k), blocks[i].central_projection);
    const std::size_t r = numeric_rank(z * p * z, 0.5, 1e3 * eps);
    if (r % blocks[i].multiplicity != 0)
      throw Error(op, "NonIntegral", "rank " + std::to_string(r) + " in block " + std::to_string(i));
    out(static_cast<Eigen::Index>(i)) = static_cast<long long>(r / blocks[i].multiplicity);
  }
  return out;
}

bool mvn_equivalent(const Matrix& p, const Matrix& q, const FDCAlgebra& a, const Tolerance& tol) {
  const std::vector<BlockInfo> blocks = blocks_of(a, {}, tol);
  return dimension_vector(a, blocks, p, tol) == dimension_vector(a, blocks, q, tol);
}

K0Class k0_class(const Matrix& p, const FDCAlgebra& a, const Tolerance& tol) {
  return {0, dimension_vector(a, blocks_of(a, {}, tol), p, tol)};
}

Matrix Homomorphism::operator()(const Matrix& x) const {
  const Vector c = domain.coordinates(x);
  const auto n = static_cast<Eigen::Index>(codomain.ambient_dim());
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < images.size(); ++j) out += c(static_cast<Eigen::Index>(j)) * images[j];
  return out;
}

namespace {

Matrix unit_of(const FDCAlgebra& a) {
  if (a.unital()) return identity(a.ambient_dim());
  const auto n = static_cast<Eigen::Index>(a.ambient_dim());
  Matrix one = Matrix::Zero(n, n);
  for (const BlockInfo& b : blocks_of(a)) one += b.central_projection;
  return one;
}

void certify(const Homomorphism& phi, bool unital, const Tolerance& tol) {
  const char* op = "Homomorphism";
  const std::size_t d = phi.domain.dim();
  const auto& sc = phi.domain.structure();
  const auto n = static_cast<Eigen::Index>(phi.codomain.ambient_dim());
  const double eps = tol.effective(1.0, std::max(phi.domain.ambient_dim(), phi.codomain.ambient_dim()));
  for (const Matrix& m : phi.images) {
    const double off = phi.codomain.membership_residual(m);
    if (off > eps) throw Error(op, "NotMember", "image leaves the codomain by " + std::to_string(off));
  }
  const double product = kernels::max_over(d * d, [&](std::size_t ij) {
    const std::size_t i = ij / d, j = ij % d;
    Matrix target = Matrix::Zero(n, n);
    for (std::size_t l = 0; l < d; ++l) target += sc(i, j, l) * phi.images[l];
    return (phi.images[i] * phi.images[j] - target).norm();
  });
  const double adjoint = kernels::max_over(d, [&](std::size_t i) {
    Matrix target = Matrix::Zero(n, n);
    for (std::size_t l = 0; l < d; ++l) target += sc.star[i * d + l] * phi.images[l];
    return (Matrix(phi.images[i].adjoint()) - target).norm();
  });
  if (std::max(product, adjoint) > eps)
    throw Error(op, "NotAHomomorphism", "residual " + std::to_string(std::max(product, adjoint)));
  if (unital) {
    const double r = (phi(unit_of(phi.domain)) - unit_of(phi.codomain)).norm();
    if (r > eps) throw Error(op, "NotUnital", "||phi(1) - 1|| = " + std::to_string(r));
  }
}

}  // namespace

Homomorphism Homomorphism::fit(const FDCAlgebra& domain, const FDCAlgebra& codomain, const std::vector<Matrix>& sources,
                               const std::vector<Matrix>& targets, bool unital, const Tolerance& tol) {
  const char* op = "Homomorphism";
  if (sources.size() != targets.size() || sources.empty()) throw Error(op, "InvalidArgument", "need matching nonempty lists");
  const std::size_t d = domain.dim();
  const auto di = static_cast<Eigen::Index>(d);
  const auto kk = static_cast<Eigen::Index>(sources.size());
  const auto n = static_cast<Eigen::Index>(codomain.ambient_dim());
  const double eps = tol.effective(1.0, std::max(domain.ambient_dim(), codomain.ambient_dim()));
  Matrix s(di, kk);
  for (Eigen::Index k = 0; k < kk; ++k) {
    const Matrix& src = sources[static_cast<std::size_t>(k)];
    if (domain.membership_residual(src) > tol.effective(src)) throw Error(op, "NotMember", "source outside the domain");
    if (targets[static_cast<std::size_t>(k)].rows() != n || targets[static_cast<std::size_t>(k)].cols() != n)
      throw Error(op, "DimensionMismatch", "target size");
    s.col(k) = domain.coordinates(src);
  }
  if (numeric_rank(s, tol.effective(s), 0.0) != d) throw Error(op, "InvalidArgument", "sources do not span the domain");
  const Matrix pinv = s.completeOrthogonalDecomposition().pseudoInverse();  // K x d
  Homomorphism phi{domain, codomain, {}};
  for (std::size_t j = 0; j < d; ++j) {
    Matrix img = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < kk; ++k) img += pinv(k, static_cast<Eigen::Index>(j)) * targets[static_cast<std::size_t>(k)];
    phi.images.push_back(std::move(img));
  }
  for (Eigen::Index k = 0; k < kk; ++k) {
    const Matrix& target = targets[static_cast<std::size_t>(k)];
    const double r = (phi(sources[static_cast<std::size_t>(k)]) - target).norm();
    if (r > eps * std::max(1.0, target.norm())) throw Error(op, "NotLinear", "targets are not a linear image of the sources");
  }
  certify(phi, unital, tol);
  return phi;
}

Homomorphism compose(const Homomorphism& second, const Homomorphism& first) {
  if (first.codomain.ambient_dim() != second.domain.ambient_dim())
    throw Error("compose", "DimensionMismatch", "codomain of the first map is not the domain of the second");
  Homomorphism out{first.domain, second.codomain, {}};
  for (const Matrix& m : first.images) out.images.push_back(second(m));
  return out;
}

IntMatrix k0_of_hom(const Homomorphism& phi, std::uint64_t seed, const Tolerance& tol) {
  const DecomposeOptions opts{seed};
  const std::vector<BlockInfo> src = blocks_of(phi.domain, opts, tol);
  const std::vector<BlockInfo> dst = blocks_of(phi.codomain, opts, tol);
  IntMatrix out(static_cast<Eigen::Index>(dst.size()), static_cast<Eigen::Index>(src.size()));
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Matrix p = minimal_projection(phi.domain, src[i], seed, tol);
    out.col(static_cast<Eigen::Index>(i)) = dimension_vector(phi.codomain, dst, phi(p), tol);
  }
  return out;
}

namespace {

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("integer arithmetic", "Overflow", "");
  return r;
}

long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("integer arithmetic", "Overflow", "");
  return r;
}

}  // namespace

IntMatrix int_multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw Error("int_multiply", "DimensionMismatch", "");
  IntMatrix out = IntMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index k = 0; k < a.cols(); ++k) out(i, j) = checked_add(out(i, j), checked_mul(a(i, k), b(k, j)));
  return out;
}

IntVector int_apply(const IntMatrix& a, const IntVector& v) {
  const IntMatrix col = v;
  return int_multiply(a, col).col(0);
}

std::size_t integer_rank(const IntMatrix& m) {
  // Bareiss elimination; every intermediate entry is a minor of m.
  using Wide = __int128;
  const Eigen::Index rows = m.rows(), cols = m.cols();
  std::vector<std::vector<Wide>> a(static_cast<std::size_t>(rows), std::vector<Wide>(static_cast<std::size_t>(cols)));
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  const Wide limit = Wide(1) << 62;
  Wide prev = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < static_cast<std::size_t>(cols) && rank < static_cast<std::size_t>(rows); ++c) {
    std::size_t pivot = rank;
    while (pivot < a.size() && a[pivot][c] == 0) ++pivot;
    if (pivot == a.size()) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = rank + 1; r < a.size(); ++r) {
      for (std::size_t j = c + 1; j < static_cast<std::size_t>(cols); ++j) {
        const Wide v = (a[rank][c] * a[r][j] - a[r][c] * a[rank][j]) / prev;
        if (v > limit || v < -limit) throw Error("integer_rank", "Overflow", "");
        a[r][j] = v;
      }
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

void BratteliDiagram::validate() const {
  const char* op = "BratteliDiagram";
  if (levels.empty()) throw Error(op, "InvalidDiagram", "no levels");
  if (maps.size() + 1 != levels.size()) throw Error(op, "InvalidDiagram", "need one map between consecutive levels");
  for (const IntVector& l : levels)
    if (l.size() == 0 || (l.array() <= 0).any()) throw Error(op, "InvalidDiagram", "block sizes must be positive");
  for (std::size_t n = 0; n < maps.size(); ++n) {
    const IntMatrix& m = maps[n];
    if (m.rows() != levels[n + 1].size() || m.cols() != levels[n].size())
      throw Error(op, "InvalidDiagram", "map " + std::to_string(n + 1) + " has the wrong shape");
    if ((m.array() < 0).any()) throw Error(op, "InvalidDiagram", "negative multiplicity");
    if (unital && int_apply(m, levels[n]) != levels[n + 1])
      throw Error(op, "InvalidDiagram", "map " + std::to_string(n + 1) + " is not unital");
  }
}

BratteliDiagram BratteliDiagram::car(std::size_t num_levels) {
  if (num_levels == 0 || num_levels > 62) throw Error("BratteliDiagram", "InvalidArgument", "1 <= levels <= 62");
  BratteliDiagram d;
  d.unital = true;
  for (std::size_t n = 0; n < num_levels; ++n) {
    IntVector v(1);
    v(0) = 1LL << n;
    d.levels.push_back(v);
    if (n + 1 < num_levels) d.maps.push_back(IntMatrix::Constant(1, 1, 2));
  }
  return d;
}

const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::equal: return "equal";
    case Comparison::distinct: return "distinct";
    case Comparison::undecided_at_horizon: return "undecided_at_horizon";
  }
  return "";
}

const char* to_string(Positivity p) {
  switch (p) {
    case Positivity::positive: return "positive";
    case Positivity::not_positive: return "not_positive";
    case Positivity::undecided_at_horizon: return "undecided_at_horizon";
  }
  return "";
}

namespace {

void check_class(const BratteliDiagram& d, const K0Class& x) {
  if (x.level < 1 || x.level > d.depth())
    throw Error("bratteli", "LevelOutOfRange", "level " + std::to_string(x.level) + " of " + std::to_string(d.depth()));
  if (x.vector.size() != d.levels[x.level - 1].size())
    throw Error("bratteli", "DimensionMismatch", "vector length does not match level " + std::to_string(x.level));
}

/// Whether every connecting map from `level` to the end is injective.
bool injective_from(const BratteliDiagram& d, std::size_t level) {
  for (std::size_t n = level - 1; n < d.maps.size(); ++n)
    if (integer_rank(d.maps[n]) != static_cast<std::size_t>(d.maps[n].cols())) return false;
  return true;
}

}  // namespace

K0Class propagate(const BratteliDiagram& d, const K0Class& x, std::size_t target) {
  check_class(d, x);
  if (target < x.level || target > d.depth()) throw Error("propagate", "LevelOutOfRange", std::to_string(target));
  K0Class out = x;
  for (; out.level < target; ++out.level) out.vector = int_apply(d.maps[out.level - 1], out.vector);
  return out;
}

Comparison bratteli_k0_equal(const BratteliDiagram& d, const K0Class& x, const K0Class& y, std::size_t horizon) {
  d.validate();
  check_class(d, x);
  check_class(d, y);
  const std::size_t start = std::max(x.level, y.level);
  const std::size_t last = std::min(d.depth(), start + horizon);
  K0Class px = propagate(d, x, start), py = propagate(d, y, start);
  for (std::size_t level = start;; ++level) {
    if (px.vector == py.vector) return Comparison::equal;
    if (level == last) break;
    px = propagate(d, px, level + 1);
    py = propagate(d, py, level + 1);
  }
  return injective_from(d, start) ? Comparison::distinct : Comparison::undecided_at_horizon;
}

Positivity bratteli_k0_positive(const BratteliDiagram& d, const K0Class& x, std::size_t horizon) {
  d.validate();
  check_class(d, x);
  const std::size_t last = std::min(d.depth(), x.level + horizon);
  K0Class p = x;
  for (std::size_t level = x.level;; ++level) {
    if ((p.vector.array() >= 0).all()) return Positivity::positive;
    // nonnegative injective maps keep a nonzero nonpositive vector nonzero and nonpositive
    if ((p.vector.array() <= 0).all() && injective_from(d, level)) return Positivity::not_positive;
    if (level == last) break;
    p = propagate(d, p, level + 1);
  }
  return Positivity::undecided_at_horizon;
}

K0Class index_map(const K0Class& defect_ker, const K0Class& defect_coker) {
  if (defect_ker.level != defect_coker.level || defect_ker.vector.size() != defect_coker.vector.size())
    throw Error("index_map", "DimensionMismatch", "classes live over different algebras");
  return {defect_ker.level, defect_ker.vector - defect_coker.vector};
}

K0Class index_map_matrix(const Matrix& v, const FDCAlgebra& a, const std::vector<std::size_t>& ideal_blocks,
                         const Tolerance& tol) {
  const char* op = "index_map_matrix";
  require_square(v, op);
  const std::vector<BlockInfo> blocks = blocks_of(a, {}, tol);
  std::vector<bool> in_ideal(blocks.size(), false);
  for (std::size_t b : ideal_blocks) {
    if (b >= blocks.size()) throw Error(op, "InvalidArgument", "block index " + std::to_string(b));
    in_ideal[b] = true;
  }
  const std::size_t n = a.ambient_dim();
  const auto rows = static_cast<std::size_t>(v.rows());
  if (rows % n != 0) throw Error(op, "DimensionMismatch", "");
  const std::size_t k = rows / n;
  const double eps = tol.effective(v);
  if ((v * v.adjoint() * v - v).norm() > eps) throw Error(op, "NotPartialIsometry", "");

  const auto ni = static_cast<Eigen::Index>(n);
  Matrix one = Matrix::Zero(ni, ni), quotient_unit = Matrix::Zero(ni, ni);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    one += blocks[b].central_projection;
    if (!in_ideal[b]) quotient_unit += blocks[b].central_projection;
  }
  const Matrix zq = kron(identity(k), quotient_unit);
  const Matrix image = zq * v;
  if ((image.adjoint() * image - zq).norm() > eps || (image * image.adjoint() - zq).norm() > eps)
    throw Error(op, "QuotientNotUnitary", "");

  const Matrix unit = kron(identity(k), one);
  const IntVector ker = dimension_vector(a, blocks, unit - v.adjoint() * v, tol);
  const IntVector coker = dimension_vector(a, blocks, unit - v * v.adjoint(), tol);
  K0Class out{0, IntVector(static_cast<Eigen::Index>(ideal_blocks.size()))};
  for (std::size_t i = 0; i < ideal_blocks.size(); ++i) {
    const auto b = static_cast<Eigen::Index>(ideal_blocks[i]);
    out.vector(static_cast<Eigen::Index>(i)) = ker(b) - coker(b);
  }
  return out;
}

}  // namespace opalg
