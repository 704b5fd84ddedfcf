#include "opalg/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "opalg/random.hpp"

namespace opalg {

struct FDCAlgebra::Data {
  std::size_t ambient_dim = 0;
  std::vector<Matrix> basis;
  Matrix stacked;  // column k = vec(basis[k])
  bool unital = false;
  mutable std::once_flag structure_once;
  mutable std::unique_ptr<kernels::StructureConstants> structure;
};

FDCAlgebra::FDCAlgebra() : data_(std::make_shared<const Data>()) {}
std::size_t FDCAlgebra::ambient_dim() const { return data_->ambient_dim; }
std::size_t FDCAlgebra::dim() const { return data_->basis.size(); }
const std::vector<Matrix>& FDCAlgebra::basis() const { return data_->basis; }
bool FDCAlgebra::unital() const { return data_->unital; }

namespace {

double closeness(const Tolerance& tol, std::size_t n) { return tol.effective(1.0, n); }

void check_generator(const Matrix& g, std::size_t n, const char* op) {
  require_square(g, op);
  if (static_cast<std::size_t>(g.rows()) != n)
    throw Error(op, "DimensionMismatch", std::to_string(g.rows()) + " vs ambient " + std::to_string(n));
  require_finite(g, op);
}

}  // namespace

bool extend_orthonormal(std::vector<Matrix>& basis, const Matrix& candidate, double threshold) {
  Matrix r = candidate;
  for (int pass = 0; pass < 2; ++pass)
    for (const Matrix& b : basis) r -= hs_inner(b, r) * b;
  const double norm = r.norm();
  if (norm <= threshold) return false;
  basis.push_back(r / norm);
  return true;
}

FDCAlgebra FDCAlgebra::make(std::size_t ambient_dim, std::vector<Matrix> orthonormal_basis, const Tolerance& tol,
                            std::unique_ptr<kernels::StructureConstants> known) {
  auto data = std::make_shared<Data>();
  if (known) std::call_once(data->structure_once, [&] { data->structure = std::move(known); });
  data->ambient_dim = ambient_dim;
  data->basis = std::move(orthonormal_basis);
  const auto n = static_cast<Eigen::Index>(ambient_dim);
  data->stacked.resize(n * n, static_cast<Eigen::Index>(data->basis.size()));
  for (std::size_t k = 0; k < data->basis.size(); ++k)
    data->stacked.col(static_cast<Eigen::Index>(k)) = data->basis[k].reshaped();
  FDCAlgebra out(data);
  const Matrix id = identity(ambient_dim);
  data->unital = !data->basis.empty() &&
                 out.membership_residual(id) <= tol.effective(id.norm(), ambient_dim);
  return out;
}

FDCAlgebra FDCAlgebra::generate(std::size_t ambient_dim, std::span<const Matrix> generators, bool unital,
                                const Tolerance& tol) {
  const char* op = "generate";
  if (ambient_dim == 0) throw Error(op, "InvalidArgument", "ambient dimension 0");
  for (const Matrix& g : generators) check_generator(g, ambient_dim, op);

  std::vector<Matrix> basis;
  auto add = [&](const Matrix& c) { return extend_orthonormal(basis, c, tol.effective(c.norm(), ambient_dim)); };
  if (unital) add(identity(ambient_dim));
  for (const Matrix& g : generators) {
    add(g);
    add(g.adjoint());
  }

  const std::size_t limit = ambient_dim * ambient_dim;
  std::size_t checked = 0;  // products among basis[0, checked) already absorbed
  while (checked < basis.size()) {
    const std::vector<Matrix> snapshot = basis;
    const std::span<const Matrix> all(snapshot);
    const std::span<const Matrix> fresh = all.subspan(checked);
    std::vector<Matrix> candidates = kernels::pairwise_products(fresh, all);
    std::vector<Matrix> right = kernels::pairwise_products(all.first(checked), fresh);
    candidates.insert(candidates.end(), right.begin(), right.end());
    for (const Matrix& f : fresh) candidates.push_back(f.adjoint());
    checked = snapshot.size();
    for (const Matrix& c : candidates) {
      add(c);
      if (basis.size() > limit)
        throw Error(op, "DimensionOverflow", "span exceeds N^2; rank decisions are inconsistent");
    }
  }
  return make(ambient_dim, std::move(basis), tol);
}

FDCAlgebra FDCAlgebra::from_span(std::size_t ambient_dim, std::span<const Matrix> elements, const Tolerance& tol) {
  const char* op = "from_span";
  std::vector<Matrix> basis;
  for (const Matrix& e : elements) {
    check_generator(e, ambient_dim, op);
    extend_orthonormal(basis, e, tol.effective(e.norm(), ambient_dim));
  }
  // The certificate already yields the structure constants; keep them.
  auto sc = std::make_unique<kernels::StructureConstants>(kernels::structure_constants(basis));
  const double residual = std::max(sc->product_residual, sc->star_residual);
  if (residual > closeness(tol, ambient_dim))
    throw Error(op, "NotClosed", "closure residual " + std::to_string(residual));
  return make(ambient_dim, std::move(basis), tol, std::move(sc));
}

Vector FDCAlgebra::coordinates(const Matrix& x) const {
  if (dim() == 0) return Vector(0);
  return data_->stacked.adjoint() * x.reshaped();
}

Matrix FDCAlgebra::element(const Vector& coords) const {
  const auto n = static_cast<Eigen::Index>(ambient_dim());
  if (dim() == 0) return Matrix::Zero(n, n);
  const Vector v = data_->stacked * coords;
  return v.reshaped(n, n);
}

double FDCAlgebra::membership_residual(const Matrix& x) const {
  if (dim() == 0) return x.norm();
  const Vector v = x.reshaped();
  return (v - data_->stacked * (data_->stacked.adjoint() * v)).norm();
}

const kernels::StructureConstants& FDCAlgebra::structure() const {
  std::call_once(data_->structure_once, [this] {
    data_->structure = std::make_unique<kernels::StructureConstants>(kernels::structure_constants(data_->basis));
  });
  return *data_->structure;
}

FDCAlgebra FDCAlgebra::with_decomposition(std::vector<BlockInfo> blocks) const {
  FDCAlgebra out = *this;
  out.decomposition_ = std::move(blocks);
  return out;
}

FDCAlgebra center(const FDCAlgebra& a, const Tolerance& tol) {
  const std::size_t d = a.dim();
  if (d == 0) return a;
  const auto& sc = a.structure();
  // x = sum_k c_k b_k is central iff sum_k c_k ([b_k, b_j])_l = 0 for all j, l.
  Matrix system(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t k = 0; k < d; ++k)
        system(static_cast<Eigen::Index>(j * d + l), static_cast<Eigen::Index>(k)) = sc(k, j, l) - sc(j, k, l);
  const Matrix kernel = null_space(system, tol.effective(1.0, d));
  std::vector<Matrix> elements;
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) elements.push_back(a.element(kernel.col(c)));
  return FDCAlgebra::from_span(a.ambient_dim(), elements, tol);
}

namespace {

struct Spectral {
  Eigen::VectorXd values;
  Matrix vectors;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;  // [begin, end) in ascending order
  double min_gap = 0;
};

Spectral hermitian_clusters(const Matrix& h, double radius) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
  Spectral s{es.eigenvalues(), es.eigenvectors(), {}, std::numeric_limits<double>::infinity()};
  const Eigen::Index n = s.values.size();
  Eigen::Index begin = 0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i == n || s.values(i) - s.values(i - 1) > radius) {
      s.clusters.emplace_back(begin, i);
      if (i < n) s.min_gap = std::min(s.min_gap, s.values(i) - s.values(i - 1));
      begin = i;
    }
  }
  return s;
}

Matrix cluster_projection(const Spectral& s, std::pair<Eigen::Index, Eigen::Index> c) {
  const Matrix v = s.vectors.middleCols(c.first, c.second - c.first);
  return v * v.adjoint();
}

bool entries_less(const Matrix& x, const Matrix& y) {
  auto key = [](double v) { return std::round(v * 1e6); };
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xr = key(x.data()[i].real()), yr = key(y.data()[i].real());
    if (xr != yr) return xr < yr;
    const double xi = key(x.data()[i].imag()), yi = key(y.data()[i].imag());
    if (xi != yi) return xi < yi;
  }
  return false;
}

std::size_t checked_integer(double x, const char* what) {
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-6 || r < 0)
    throw Error("block_decompose", "NonIntegral", std::string(what) + " = " + std::to_string(x));
  return static_cast<std::size_t>(r);
}

}  // namespace

std::vector<BlockInfo> block_decompose(const FDCAlgebra& a, const DecomposeOptions& opts, const Tolerance& tol) {
  const char* op = "block_decompose";
  const std::size_t n = a.ambient_dim();
  if (a.dim() == 0) return {};
  const FDCAlgebra z = center(a, tol);
  const std::size_t r = z.dim();

  std::vector<Matrix> hermitian;
  for (const Matrix& b : z.basis()) {
    hermitian.push_back((b + b.adjoint()) / 2.0);
    hermitian.push_back((b - b.adjoint()) / Complex(0.0, 2.0));
  }

  Rng rng(opts.seed);
  std::vector<Matrix> projections;
  for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
    Matrix x = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const Matrix& h : hermitian) x += random_real(rng) * h;
    const double radius = tol.effective(x);
    const Spectral s = hermitian_clusters(x, radius);
    const double separation = std::max(1e3 * radius, 1e-6);
    if (s.min_gap < separation) continue;

    projections.clear();
    for (const auto& c : s.clusters) {
      Matrix p = cluster_projection(s, c);
      if (a.membership_residual(p) <= tol.effective(p.norm(), n)) projections.push_back(std::move(p));
    }
    if (projections.size() == r) break;
    projections.clear();
  }
  if (projections.size() != r)
    throw Error(op, "RetryBudgetExhausted", "no generic central element separated " + std::to_string(r) + " blocks");

  const auto& sc = a.structure();
  std::vector<BlockInfo> blocks;
  std::size_t total = 0;
  for (Matrix& p : projections) {
    const Matrix left = sc.left_multiplication(a.coordinates(p));
    const std::size_t dim_za = checked_integer(left.trace().real(), "dim(zA)");
    const auto size = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(dim_za))));
    if (size * size != dim_za) throw Error(op, "NonIntegral", "dim(zA) = " + std::to_string(dim_za) + " not a square");
    const std::size_t rank = checked_integer(p.trace().real(), "rank(z)");
    if (size == 0 || rank % size != 0)
      throw Error(op, "NonIntegral", "rank " + std::to_string(rank) + " not divisible by " + std::to_string(size));
    total += dim_za;
    blocks.push_back({size, rank / size, std::move(p)});
  }
  if (total != a.dim()) throw Error(op, "NonIntegral", "sum n_i^2 != dim A");

  std::sort(blocks.begin(), blocks.end(), [](const BlockInfo& x, const BlockInfo& y) {
    if (x.block_size != y.block_size) return x.block_size < y.block_size;
    if (x.rank() != y.rank()) return x.rank() < y.rank();
    return entries_less(x.central_projection, y.central_projection);
  });
  return blocks;
}

FDCAlgebra decompose(const FDCAlgebra& a, const DecomposeOptions& opts, const Tolerance& tol) {
  return a.with_decomposition(block_decompose(a, opts, tol));
}

FDCAlgebra commutant(std::span<const Matrix> s, std::size_t ambient_dim, const Tolerance& tol) {
  const char* op = "commutant";
  const auto n = static_cast<Eigen::Index>(ambient_dim);
  std::vector<Matrix> gens;
  for (const Matrix& g : s) {
    check_generator(g, ambient_dim, op);
    gens.push_back(g);
    gens.push_back(g.adjoint());
  }

  // Null space of T -> [T, S] intersected one generator at a time; the
  // columns of `basis` stay orthonormal so singular values are honest.
  Matrix basis = Matrix::Identity(n * n, n * n);
  for (const Matrix& g : gens) {
    if (basis.cols() == 0) break;
    Matrix image(n * n, basis.cols());
    for (Eigen::Index k = 0; k < basis.cols(); ++k) {
      const Matrix t = basis.col(k).reshaped(n, n);
      image.col(k) = Matrix(t * g - g * t).reshaped();
    }
    basis = basis * null_space(image, tol.effective(g.norm(), ambient_dim));
  }

  std::vector<Matrix> elements;
  elements.reserve(static_cast<std::size_t>(basis.cols()));
  for (Eigen::Index k = 0; k < basis.cols(); ++k) elements.emplace_back(basis.col(k).reshaped(n, n));
  // The commutant of a *-closed set is a *-algebra, so no closure round.
  return FDCAlgebra::make(ambient_dim, std::move(elements), tol);
}

DoubleCommutantReport double_commutant(const FDCAlgebra& a, const Tolerance& tol) {
  if (!a.unital()) throw Error("double_commutant_check", "NonUnital", "");
  const FDCAlgebra first = commutant(a.basis(), a.ambient_dim(), tol);
  const FDCAlgebra second = commutant(first.basis(), a.ambient_dim(), tol);
  DoubleCommutantReport rep;
  rep.dim_algebra = a.dim();
  rep.dim_commutant = first.dim();
  rep.dim_double_commutant = second.dim();
  for (const Matrix& b : a.basis()) rep.containment_residual = std::max(rep.containment_residual, second.membership_residual(b));
  rep.holds = rep.dim_algebra == rep.dim_double_commutant &&
              rep.containment_residual <= closeness(tol, a.ambient_dim());
  return rep;
}

bool double_commutant_check(const FDCAlgebra& a, const Tolerance& tol) { return double_commutant(a, tol).holds; }

namespace {

Matrix random_element(const FDCAlgebra& a, Rng& rng) {
  Vector c(static_cast<Eigen::Index>(a.dim()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = random_complex(rng);
  return a.element(c);
}

// Spectral projections of a generic self-adjoint element of zAz, ordered by
// eigenvalue, excluding the complement of z. Each must have rank m.
std::vector<Matrix> orthogonal_minimal_projections(const FDCAlgebra& a, const BlockInfo& block, Rng& rng,
                                                   const Tolerance& tol, int max_retries) {
  const Matrix& z = block.central_projection;
  const std::size_t n = a.ambient_dim();
  const Matrix id = identity(n);
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    const Matrix x = random_element(a, rng);
    const Matrix h = z * (x + x.adjoint()) * z;
    const double shift = h.norm() + 1.0;
    const Matrix shifted = h - shift * (id - z);
    const double radius = tol.effective(shifted);
    const Spectral s = hermitian_clusters(shifted, radius);
    if (s.min_gap < std::max(1e3 * radius, 1e-6)) continue;
    std::vector<Matrix> out;
    bool ok = true;
    for (const auto& c : s.clusters) {
      if (s.values(c.first) < -shift / 2.0) continue;  // complement of z
      if (static_cast<std::size_t>(c.second - c.first) != block.multiplicity) {
        ok = false;
        break;
      }
      out.push_back(cluster_projection(s, c));
    }
    if (ok && out.size() == block.block_size) return out;
  }
  throw Error("minimal_projection", "RetryBudgetExhausted", "");
}

}  // namespace

Matrix minimal_projection(const FDCAlgebra& a, const BlockInfo& block, std::uint64_t seed, const Tolerance& tol) {
  Rng rng(seed);
  return orthogonal_minimal_projections(a, block, rng, tol, 8).back();
}

std::vector<Matrix> matrix_units(const FDCAlgebra& a, const BlockInfo& block, std::uint64_t seed, const Tolerance& tol) {
  Rng rng(seed);
  const std::vector<Matrix> p = orthogonal_minimal_projections(a, block, rng, tol, 8);
  const std::size_t size = block.block_size;
  const auto m = static_cast<Eigen::Index>(block.multiplicity);

  std::vector<Matrix> first_row(size);
  first_row[0] = p[0];
  const Matrix x = random_element(a, rng);
  for (std::size_t j = 1; j < size; ++j) {
    const Matrix w = p[0] * x * p[j];
    Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()(m - 1) <= tol.effective(w))
      throw Error("matrix_units", "Degenerate", "p_1 x p_j has rank below multiplicity");
    first_row[j] = svd.matrixU().leftCols(m) * svd.matrixV().leftCols(m).adjoint();
  }
  std::vector<Matrix> units(size * size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) units[i * size + j] = first_row[i].adjoint() * first_row[j];
  return units;
}

FDCAlgebra block_diagonal_algebra(std::span<const std::size_t> sizes, std::span<const std::size_t> multiplicities) {
  if (sizes.size() != multiplicities.size())
    throw Error("block_diagonal_algebra", "InvalidArgument", "sizes and multiplicities differ in length");
  std::size_t total = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) total += sizes[i] * multiplicities[i];
  const auto big = static_cast<Eigen::Index>(total);
  std::vector<Matrix> elements;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const std::size_t nb = sizes[i], mb = multiplicities[i];
    if (nb == 0 || mb == 0) throw Error("block_diagonal_algebra", "InvalidArgument", "zero size or multiplicity");
    const double w = 1.0 / std::sqrt(static_cast<double>(mb));
    for (std::size_t r = 0; r < nb; ++r)
      for (std::size_t c = 0; c < nb; ++c) {
        Matrix e = Matrix::Zero(big, big);
        for (std::size_t copy = 0; copy < mb; ++copy)
          e(static_cast<Eigen::Index>(offset + copy * nb + r), static_cast<Eigen::Index>(offset + copy * nb + c)) = w;
        elements.push_back(std::move(e));
      }
    offset += nb * mb;
  }
  return FDCAlgebra::from_span(total, elements);
}

FDCAlgebra full_matrix_algebra(std::size_t n) {
  const std::size_t s[] = {n}, m[] = {1};
  return block_diagonal_algebra(s, m);
}

FDCAlgebra diagonal_algebra(std::size_t n) {
  const std::vector<std::size_t> ones(n, 1);
  return block_diagonal_algebra(ones, ones);
}

}  // namespace opalg
