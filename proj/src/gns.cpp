#include "opalg/gns.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace opalg {

Matrix state_gram(const FDCAlgebra& a, const Vector& values) {
  const auto& sc = a.structure();
  const std::size_t d = a.dim();
  const auto di = static_cast<Eigen::Index>(d);
  // w(k, j) = phi(b_k b_j), star(i, k) = <b_k, b_i^*>
  Matrix w(di, di), star(di, di);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j) {
      Complex acc(0.0);
      for (std::size_t l = 0; l < d; ++l) acc += sc(k, j, l) * values(static_cast<Eigen::Index>(l));
      w(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = acc;
      star(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = sc.star[k * d + j];
    }
  return star * w;
}

State make_state(const FDCAlgebra& a, const Vector& values, const Tolerance& tol) {
  const char* op = "make_state";
  if (static_cast<std::size_t>(values.size()) != a.dim())
    throw Error(op, "InvalidArgument", "expected " + std::to_string(a.dim()) + " values");
  const Matrix g = state_gram(a, values);
  const double eps = tol.effective(g);
  if ((g - g.adjoint()).norm() > eps) throw Error(op, "NotPositive", "gram matrix not hermitian");
  if (g.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((g + g.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -eps)
      throw Error(op, "NotPositive", "gram eigenvalue " + std::to_string(es.eigenvalues()(0)));
  }
  State phi{a, values};
  if (a.unital()) {
    const Complex one = phi(identity(a.ambient_dim()));
    if (std::abs(one - Complex(1.0)) > tol.effective(1.0, a.dim()))
      throw Error(op, "NotNormalized", "phi(1) = " + std::to_string(one.real()));
  }
  return phi;
}

State state_from_density(const FDCAlgebra& a, const Matrix& rho, const Tolerance& tol) {
  Vector values(static_cast<Eigen::Index>(a.dim()));
  for (std::size_t i = 0; i < a.dim(); ++i) values(static_cast<Eigen::Index>(i)) = (rho * a.basis()[i]).trace();
  return make_state(a, values, tol);
}

Matrix Representation::operator()(const Matrix& x) const {
  const Vector c = algebra.coordinates(x);
  const auto k = static_cast<Eigen::Index>(dim);
  Matrix out = Matrix::Zero(k, k);
  for (std::size_t i = 0; i < images.size(); ++i) out += c(static_cast<Eigen::Index>(i)) * images[i];
  return out;
}

Representation identity_representation(const FDCAlgebra& a) { return {a, a.basis(), a.ambient_dim()}; }

Representation direct_sum(const Representation& x, const Representation& y) {
  if (x.images.size() != y.images.size()) throw Error("direct_sum", "DimensionMismatch", "different algebras");
  Representation out{x.algebra, {}, x.dim + y.dim};
  for (std::size_t i = 0; i < x.images.size(); ++i) out.images.push_back(opalg::direct_sum(x.images[i], y.images[i]));
  return out;
}

HomomorphismResidual homomorphism_residual(const Representation& rep) {
  const auto& sc = rep.algebra.structure();
  const std::size_t d = rep.algebra.dim();
  if (rep.images.size() != d) throw Error("homomorphism_residual", "DimensionMismatch", "image count");
  const auto k = static_cast<Eigen::Index>(rep.dim);
  HomomorphismResidual r;
  r.product = kernels::max_over(d * d, [&](std::size_t ij) {
    const std::size_t i = ij / d, j = ij % d;
    Matrix target = Matrix::Zero(k, k);
    for (std::size_t l = 0; l < d; ++l) target += sc(i, j, l) * rep.images[l];
    return (rep.images[i] * rep.images[j] - target).norm();
  });
  r.adjoint = kernels::max_over(d, [&](std::size_t i) {
    Matrix target = Matrix::Zero(k, k);
    for (std::size_t l = 0; l < d; ++l) target += sc.star[i * d + l] * rep.images[l];
    return (Matrix(rep.images[i].adjoint()) - target).norm();
  });
  return r;
}

GNSResult gns_construct(const State& phi, const Tolerance& tol) {
  const char* op = "gns_construct";
  const FDCAlgebra& a = phi.algebra;
  if (!a.unital()) throw Error(op, "NonUnital", "GNS is built for unital algebras only");
  const std::size_t d = a.dim();
  const auto& sc = a.structure();

  GNSResult out;
  out.gram = state_gram(a, phi.values);
  Eigen::SelfAdjointEigenSolver<Matrix> es((out.gram + out.gram.adjoint()) / 2.0);
  const double cut = tol.effective(out.gram);

  // Quotient by the null space: keep eigenpairs above the cut.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > cut) keep.push_back(i);
  const auto r = static_cast<Eigen::Index>(keep.size());
  const auto di = static_cast<Eigen::Index>(d);
  Matrix to_h(r, di), from_h(di, r);  // coordinates -> H and a lift back
  for (Eigen::Index c = 0; c < r; ++c) {
    const double lambda = es.eigenvalues()(keep[static_cast<std::size_t>(c)]);
    const Vector v = es.eigenvectors().col(keep[static_cast<std::size_t>(c)]);
    to_h.row(c) = std::sqrt(lambda) * v.adjoint();
    from_h.col(c) = v / std::sqrt(lambda);
  }

  out.hilbert_dim = static_cast<std::size_t>(r);
  out.rep = {a, {}, out.hilbert_dim};
  out.rep.images.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    Matrix left(di, di);  // left multiplication by b_i on coordinates
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) left(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = sc(i, j, k);
    out.rep.images.push_back(to_h * left * from_h);
  }
  out.cyclic_vector = to_h * a.coordinates(identity(a.ambient_dim()));

  double worst = 0.0;
  Matrix orbit(r, di);
  for (std::size_t i = 0; i < d; ++i) {
    const Vector image = out.rep.images[i] * out.cyclic_vector;
    orbit.col(static_cast<Eigen::Index>(i)) = image;
    const Complex reconstructed = out.cyclic_vector.dot(image);  // <pi(b) Omega, Omega>
    worst = std::max(worst, std::abs(phi.values(static_cast<Eigen::Index>(i)) - reconstructed));
  }
  out.reconstruction_residual = worst;
  out.cyclic_rank = r == 0 ? 0 : numeric_rank(orbit, tol.effective(orbit), 0.0);
  return out;
}

namespace {

void require_homomorphism(const Representation& rep, const char* op, const Tolerance& tol) {
  const HomomorphismResidual h = homomorphism_residual(rep);
  if (h.worst() > tol.effective(1.0, std::max<std::size_t>(rep.dim, rep.algebra.ambient_dim())))
    throw Error(op, "NotAHomomorphism", "residual " + std::to_string(h.worst()));
}

}  // namespace

bool is_irreducible(const Representation& rep, const Tolerance& tol) {
  require_homomorphism(rep, "is_irreducible", tol);
  return commutant(rep.images, rep.dim, tol).dim() == 1;
}

std::vector<IrrepMultiplicity> rep_decompose(const Representation& rep, const DecomposeOptions& opts,
                                             const Tolerance& tol) {
  const char* op = "rep_decompose";
  require_homomorphism(rep, op, tol);
  const FDCAlgebra image = FDCAlgebra::generate(rep.dim, rep.images, /*unital=*/false, tol);
  const std::vector<BlockInfo> blocks = block_decompose(image, opts, tol);
  std::size_t covered = 0;
  std::vector<IrrepMultiplicity> out;
  for (const BlockInfo& b : blocks) {
    covered += b.rank();
    out.push_back({b.block_size, b.multiplicity});
  }
  if (covered != rep.dim)
    throw Error(op, "Degenerate", "degenerate corner of dimension " + std::to_string(rep.dim - covered));
  return out;
}

}  // namespace opalg
