#include "opalg/crossed.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/SparseCore>

namespace opalg {

namespace {

using Sparse = Eigen::SparseMatrix<Complex>;

// The realized generators are block-permutation shaped; sparse products keep
// the exhaustive checks cheap for |G| = 8.
std::vector<Sparse> to_sparse(const std::vector<Matrix>& ms) {
  std::vector<Sparse> out;
  out.reserve(ms.size());
  for (const Matrix& m : ms) out.push_back(m.sparseView(Complex(1.0), 0.0));
  return out;
}

Matrix unit_matrix(std::size_t n, std::size_t r, std::size_t c) {
  Matrix e = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = 1.0;
  return e;
}

void certify(const DynamicalSystem& sys, const Tolerance& tol) {
  const char* op = "DynamicalSystem";
  const FDCAlgebra& a = sys.algebra;
  const FiniteGroup& g = *sys.group;
  const std::size_t d = a.dim();
  const auto di = static_cast<Eigen::Index>(d);
  if (sys.maps.size() != g.order()) throw Error(op, "InvalidAction", "need one map per group element");
  for (const Matrix& m : sys.maps)
    if (m.rows() != di || m.cols() != di) throw Error(op, "InvalidAction", "map has wrong shape");
  const double eps = tol.effective(1.0, std::max(a.ambient_dim(), d));

  if ((sys.maps[0] - Matrix::Identity(di, di)).norm() > eps) throw Error(op, "InvalidAction", "alpha_e is not the identity");
  const double composition = kernels::max_over(g.order() * g.order(), [&](std::size_t st) {
    const std::size_t s = st / g.order(), t = st % g.order();
    return (sys.maps[s] * sys.maps[t] - sys.maps[g.mul(s, t)]).norm();
  });
  if (composition > eps) throw Error(op, "InvalidAction", "alpha_s alpha_t != alpha_st, residual " + std::to_string(composition));

  const auto& sc = a.structure();
  const double morphism = kernels::max_over(g.order(), [&](std::size_t s) {
    std::vector<Matrix> img(d);
    for (std::size_t j = 0; j < d; ++j) img[j] = a.element(sys.maps[s].col(static_cast<Eigen::Index>(j)));
    double worst = 0.0;
    Vector c(di);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) c(static_cast<Eigen::Index>(k)) = sc(i, j, k);
        worst = std::max(worst, (img[i] * img[j] - a.element(sys.maps[s] * c)).norm());
      }
      for (std::size_t k = 0; k < d; ++k) c(static_cast<Eigen::Index>(k)) = sc.star[i * d + k];
      worst = std::max(worst, (Matrix(img[i].adjoint()) - a.element(sys.maps[s] * c)).norm());
    }
    return worst;
  });
  if (morphism > eps) throw Error(op, "InvalidAction", "not a *-automorphism, residual " + std::to_string(morphism));
}

}  // namespace

Matrix DynamicalSystem::apply(std::size_t s, const Matrix& a) const {
  return algebra.element(maps[s] * algebra.coordinates(a));
}

DynamicalSystem DynamicalSystem::from_unitaries(const FDCAlgebra& a, const FiniteGroup& g, const std::vector<Matrix>& w,
                                                const Tolerance& tol) {
  const char* op = "DynamicalSystem";
  if (w.size() != g.order()) throw Error(op, "InvalidAction", "need one unitary per group element");
  const std::size_t n = a.ambient_dim();
  const double eps = tol.effective(1.0, n);
  DynamicalSystem sys{a, std::make_shared<const FiniteGroup>(g), {}};
  for (std::size_t s = 0; s < g.order(); ++s) {
    if (static_cast<std::size_t>(w[s].rows()) != n || static_cast<std::size_t>(w[s].cols()) != n)
      throw Error(op, "InvalidAction", "unitary has wrong shape");
    if ((w[s].adjoint() * w[s] - identity(n)).norm() > eps) throw Error(op, "NotUnitary", "w_" + std::to_string(s));
    Matrix m(static_cast<Eigen::Index>(a.dim()), static_cast<Eigen::Index>(a.dim()));
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const Matrix image = w[s] * a.basis()[j] * w[s].adjoint();
      const double off = a.membership_residual(image);
      if (off > eps)
        throw Error(op, "NotInvariant", "alpha_" + std::to_string(s) + " leaves the algebra by " + std::to_string(off));
      m.col(static_cast<Eigen::Index>(j)) = a.coordinates(image);
    }
    sys.maps.push_back(std::move(m));
  }
  certify(sys, tol);
  return sys;
}

DynamicalSystem DynamicalSystem::from_maps(const FDCAlgebra& a, const FiniteGroup& g, std::vector<Matrix> maps,
                                           const Tolerance& tol) {
  DynamicalSystem sys{a, std::make_shared<const FiniteGroup>(g), std::move(maps)};
  certify(sys, tol);
  return sys;
}

DynamicalSystem DynamicalSystem::trivial(const FDCAlgebra& a, const FiniteGroup& g) {
  const auto d = static_cast<Eigen::Index>(a.dim());
  return {a, std::make_shared<const FiniteGroup>(g), std::vector<Matrix>(g.order(), Matrix::Identity(d, d))};
}

DynamicalSystem translation_system(const FiniteGroup& g, const Tolerance& tol) {
  return DynamicalSystem::from_unitaries(diagonal_algebra(g.order()), g, left_regular_matrices(g), tol);
}

DynamicalSystem coset_system(const FiniteGroup& g, const std::vector<std::size_t>& subgroup,
                             std::vector<std::size_t>* representatives, const Tolerance& tol) {
  if (!g.is_subgroup(subgroup)) throw Error("coset_system", "NotASubgroup", "");
  const std::size_t n = g.order();
  std::vector<std::size_t> coset_of(n, n), reps;
  for (std::size_t s = 0; s < n; ++s) {
    if (coset_of[s] != n) continue;
    for (std::size_t h : subgroup) coset_of[g.mul(s, h)] = reps.size();
    reps.push_back(s);
  }
  const std::size_t k = reps.size();
  std::vector<Matrix> w;
  for (std::size_t s = 0; s < n; ++s) {
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t c = 0; c < k; ++c) p(static_cast<Eigen::Index>(coset_of[g.mul(s, reps[c])]), static_cast<Eigen::Index>(c)) = 1.0;
    w.push_back(std::move(p));
  }
  if (representatives) *representatives = reps;
  return DynamicalSystem::from_unitaries(diagonal_algebra(k), g, w, tol);
}

Matrix CrossedProduct::embed(const Matrix& a, std::size_t s) const {
  const Vector c = system.algebra.coordinates(a);
  const auto n = static_cast<Eigen::Index>(algebra.ambient_dim());
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < pi.size(); ++i) out += c(static_cast<Eigen::Index>(i)) * tagged[index(i, s)];
  return out;
}

Matrix CrossedProduct::realize(const std::vector<Matrix>& parts) const {
  const auto n = static_cast<Eigen::Index>(algebra.ambient_dim());
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t s = 0; s < parts.size(); ++s) out += embed(parts[s], s);
  return out;
}

Vector CrossedProduct::tagged_coefficients(const Matrix& x) const { return to_tagged * algebra.coordinates(x); }

CrossedProduct build_crossed(const DynamicalSystem& sys, const Tolerance& tol) {
  const char* op = "build_crossed";
  const FiniteGroup& g = *sys.group;
  const FDCAlgebra& a = sys.algebra;
  const std::size_t n = g.order(), big = a.ambient_dim() * n, d = a.dim();

  CrossedProduct cp;
  cp.system = sys;
  const std::vector<Matrix> lambda = left_regular_matrices(g);
  for (std::size_t i = 0; i < d; ++i) {
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(big), static_cast<Eigen::Index>(big));
    for (std::size_t t = 0; t < n; ++t) p += kron(sys.apply(g.inv(t), a.basis()[i]), unit_matrix(n, t, t));
    cp.pi.push_back(std::move(p));
  }
  for (std::size_t s = 0; s < n; ++s) cp.lambda.push_back(kron(identity(a.ambient_dim()), lambda[s]));
  cp.tagged.resize(n * d);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < d; ++i) cp.tagged[cp.index(i, s)] = cp.pi[i] * cp.lambda[s];

  cp.algebra = FDCAlgebra::from_span(big, cp.tagged, tol);
  if (cp.algebra.dim() != n * d)
    throw Error(op, "IndependenceFailure",
                "span has dimension " + std::to_string(cp.algebra.dim()) + ", expected " + std::to_string(n * d));

  const auto m = static_cast<Eigen::Index>(n * d);
  const auto sq = static_cast<Eigen::Index>(big * big);
  Matrix tagged_cols(sq, m), basis_cols(sq, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    tagged_cols.col(k) = cp.tagged[static_cast<std::size_t>(k)].reshaped();
    basis_cols.col(k) = cp.algebra.basis()[static_cast<std::size_t>(k)].reshaped();
  }
  cp.to_tagged = tagged_cols.colPivHouseholderQr().solve(basis_cols);

  // Exhaustive check of the twisted product and adjoint against the realization.
  const auto& sc = a.structure();
  const auto di = static_cast<Eigen::Index>(d);
  const std::vector<Sparse> sparse = to_sparse(cp.tagged);
  auto combine = [&](const Vector& c, std::size_t s) {
    Sparse out(static_cast<Eigen::Index>(big), static_cast<Eigen::Index>(big));
    for (std::size_t k = 0; k < d; ++k)
      if (c(static_cast<Eigen::Index>(k)) != Complex(0.0)) out += c(static_cast<Eigen::Index>(k)) * sparse[cp.index(k, s)];
    return out;
  };
  const std::size_t total = n * d;
  cp.relations.product = kernels::max_over(total * total, [&](std::size_t xy) {
    const std::size_t x = xy / total, y = xy % total;
    const std::size_t s = x / d, i = x % d, t = y / d, j = y % d;
    // coordinates of b_i alpha_s(b_j)
    const Vector moved = sys.maps[s].col(static_cast<Eigen::Index>(j));
    Vector c = Vector::Zero(di);
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t k = 0; k < d; ++k) c(static_cast<Eigen::Index>(k)) += moved(static_cast<Eigen::Index>(l)) * sc(i, l, k);
    return Sparse(sparse[x] * sparse[y] - combine(c, g.mul(s, t))).norm();
  });
  cp.relations.adjoint = kernels::max_over(total, [&](std::size_t x) {
    const std::size_t s = x / d, i = x % d;
    Vector star_i(di);
    for (std::size_t k = 0; k < d; ++k) star_i(static_cast<Eigen::Index>(k)) = sc.star[i * d + k];
    const std::size_t si = g.inv(s);
    return Sparse(Sparse(sparse[x].adjoint()) - combine(sys.maps[si] * star_i, si)).norm();
  });
  const double eps = tol.effective(1.0, big);
  if (cp.relations.worst() > eps)
    throw Error(op, "IndependenceFailure", "crossed relations violated by " + std::to_string(cp.relations.worst()));
  return cp;
}

std::vector<Matrix> crossed_multiply(const DynamicalSystem& sys, const std::vector<Matrix>& x,
                                     const std::vector<Matrix>& y) {
  const FiniteGroup& g = *sys.group;
  const auto n = static_cast<Eigen::Index>(sys.algebra.ambient_dim());
  std::vector<Matrix> out(g.order(), Matrix::Zero(n, n));
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t t = 0; t < g.order(); ++t) out[g.mul(s, t)] += x[s] * sys.apply(s, y[t]);
  return out;
}

std::vector<Matrix> crossed_adjoint(const DynamicalSystem& sys, const std::vector<Matrix>& x) {
  const FiniteGroup& g = *sys.group;
  std::vector<Matrix> out(g.order());
  for (std::size_t u = 0; u < g.order(); ++u) out[u] = sys.apply(u, x[g.inv(u)].adjoint());
  return out;
}

StoneVonNeumannReport stone_von_neumann_check(const FiniteGroup& g, const DecomposeOptions& opts,
                                              const Tolerance& tol) {
  const CrossedProduct cp = build_crossed(translation_system(g, tol), tol);
  const std::size_t n = g.order();
  StoneVonNeumannReport rep;
  rep.group_order = n;
  rep.relation_residual = cp.relations.worst();

  // e_{s,t} = chi_s x delta_{s t^-1}
  std::vector<Matrix> dense(n * n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) dense[s * n + t] = cp.embed(unit_matrix(n, s, s), g.mul(s, g.inv(t)));
  const std::vector<Sparse> units = to_sparse(dense);
  const auto big = static_cast<Eigen::Index>(cp.algebra.ambient_dim());
  const double products = kernels::max_over(n * n * n * n, [&](std::size_t idx) {
    const std::size_t q = idx / (n * n * n), r = (idx / (n * n)) % n, s = (idx / n) % n, t = idx % n;
    const Sparse expected = r == s ? units[q * n + t] : Sparse(big, big);
    return Sparse(units[q * n + r] * units[s * n + t] - expected).norm();
  });
  const double adjoints = kernels::max_over(n * n, [&](std::size_t idx) {
    const std::size_t s = idx / n, t = idx % n;
    return Sparse(Sparse(units[s * n + t].adjoint()) - units[t * n + s]).norm();
  });
  rep.matrix_unit_residual = std::max(products, adjoints);

  const std::vector<BlockInfo> blocks = block_decompose(cp.algebra, opts, tol);
  rep.is_single_block = blocks.size() == 1 && blocks[0].block_size == n;
  if (!blocks.empty()) {
    rep.block_size = blocks[0].block_size;
    rep.multiplicity = blocks[0].multiplicity;
  }
  rep.passed = rep.is_single_block && rep.matrix_unit_residual <= tol.effective(1.0, n * n);
  return rep;
}

Matrix DualAction::apply(std::size_t k, const Matrix& x) const {
  return implementers[k] * x * implementers[k].adjoint();
}

DualAction dual_action(const CrossedProduct& cp, std::uint64_t seed, const Tolerance& tol) {
  const FiniteGroup& g = *cp.system.group;
  if (!g.is_abelian()) throw Error("dual_action", "NonAbelian", g.name());
  DualAction beta;
  beta.characters = dual_group(g, seed, tol);
  for (const Character& chi : beta.characters)
    beta.implementers.push_back(kron(identity(cp.system.algebra.ambient_dim()), Matrix(chi.values.asDiagonal())));
  return beta;
}

Matrix conditional_expectation(const CrossedProduct& cp, const DualAction& beta, const Matrix& x) {
  Matrix avg = Matrix::Zero(x.rows(), x.cols());
  for (std::size_t k = 0; k < beta.implementers.size(); ++k) avg += beta.apply(k, x);
  avg /= static_cast<double>(beta.implementers.size());
  // avg = pi(a); its l2(G)-diagonal entry at the identity is a itself.
  const std::size_t d = cp.system.algebra.ambient_dim();
  const auto n = static_cast<Eigen::Index>(cp.system.group->order());
  Matrix a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = avg(r * n, c * n);
  return a;
}

Matrix identity_coefficient(const CrossedProduct& cp, const Matrix& x) {
  const Vector coeffs = cp.tagged_coefficients(x);
  const FDCAlgebra& a = cp.system.algebra;
  const auto n = static_cast<Eigen::Index>(a.ambient_dim());
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < a.dim(); ++i) out += coeffs(static_cast<Eigen::Index>(cp.index(i, 0))) * a.basis()[i];
  return out;
}

std::size_t expectation_gram_rank(const CrossedProduct& cp, const DualAction& beta, const Tolerance& tol) {
  const auto m = static_cast<Eigen::Index>(cp.tagged.size());
  Matrix gram(m, m);
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index l = 0; l < m; ++l) {
      const Matrix x = cp.tagged[static_cast<std::size_t>(k)].adjoint() * cp.tagged[static_cast<std::size_t>(l)];
      gram(k, l) = conditional_expectation(cp, beta, x).trace();
    }
  return numeric_rank(gram, tol.effective(gram), 0.0);
}

ClockShift clock_shift(std::size_t q, long long p) {
  if (q < 2) throw Error("clock_shift", "InvalidArgument", "q must be at least 2");
  ClockShift cs;
  const auto qi = static_cast<long long>(q);
  cs.coprime = std::gcd(p < 0 ? -p : p, qi) == 1;
  const long long reduced = ((p % qi) + qi) % qi;
  cs.omega = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(reduced) / static_cast<double>(q));
  const auto n = static_cast<Eigen::Index>(q);
  cs.clock = Matrix::Zero(n, n);
  cs.shift = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    cs.clock(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((reduced * k) % qi) / static_cast<double>(q));
    cs.shift((k + 1) % n, k) = 1.0;
  }
  return cs;
}

Representation integrate_covariant(const CrossedProduct& cp, const std::vector<Matrix>& pi,
                                   const std::vector<Matrix>& u, const Tolerance& tol) {
  const char* op = "integrate_covariant";
  const DynamicalSystem& sys = cp.system;
  const FiniteGroup& g = *sys.group;
  const std::size_t d = sys.algebra.dim();
  if (pi.size() != d || u.size() != g.order()) throw Error(op, "DimensionMismatch", "image counts");
  const auto k = u.empty() ? Eigen::Index{0} : u[0].rows();
  for (const Matrix& m : pi)
    if (m.rows() != k || m.cols() != k) throw Error(op, "DimensionMismatch", "representation sizes differ");
  for (const Matrix& m : u)
    if (m.rows() != k || m.cols() != k) throw Error(op, "DimensionMismatch", "representation sizes differ");
  const auto ku = static_cast<std::size_t>(k);
  const double eps = tol.effective(1.0, std::max(ku, cp.algebra.ambient_dim()));

  const double group_rep = kernels::max_over(g.order() * g.order(), [&](std::size_t st) {
    const std::size_t s = st / g.order(), t = st % g.order();
    return (u[s] * u[t] - u[g.mul(s, t)]).norm();
  });
  if (group_rep > eps || (u[0] - identity(ku)).norm() > eps)
    throw Error(op, "NotARepresentation", "U is not a representation of the group");
  for (const Matrix& m : u)
    if ((m.adjoint() * m - identity(ku)).norm() > eps) throw Error(op, "NotUnitary", "");

  double worst = 0.0;
  std::size_t worst_i = 0, worst_s = 0;
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t i = 0; i < d; ++i) {
      Matrix moved = Matrix::Zero(k, k);
      for (std::size_t j = 0; j < d; ++j) moved += sys.maps[s](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) * pi[j];
      const double r = (u[s] * pi[i] * u[s].adjoint() - moved).norm();
      if (r > worst) {
        worst = r;
        worst_i = i;
        worst_s = s;
      }
    }
  if (worst > eps)
    throw Error(op, "CovarianceViolation",
                "basis element " + std::to_string(worst_i) + ", group element " + std::to_string(worst_s) +
                    ", residual " + std::to_string(worst));

  if (sys.algebra.unital()) {
    const Vector one = sys.algebra.coordinates(identity(sys.algebra.ambient_dim()));
    Matrix image = Matrix::Zero(k, k);
    for (std::size_t j = 0; j < d; ++j) image += one(static_cast<Eigen::Index>(j)) * pi[j];
    if ((image - identity(ku)).norm() > eps) throw Error(op, "Degenerate", "pi(1) is not the identity");
  }

  Representation rep{cp.algebra, {}, ku};
  for (std::size_t b = 0; b < cp.algebra.dim(); ++b) {
    Matrix img = Matrix::Zero(k, k);
    for (std::size_t s = 0; s < g.order(); ++s)
      for (std::size_t i = 0; i < d; ++i) {
        const Complex c = cp.to_tagged(static_cast<Eigen::Index>(cp.index(i, s)), static_cast<Eigen::Index>(b));
        if (c != Complex(0.0)) img += c * pi[i] * u[s];
      }
    rep.images.push_back(std::move(img));
  }
  const HomomorphismResidual h = homomorphism_residual(rep);
  if (h.worst() > eps) throw Error(op, "NotAHomomorphism", "residual " + std::to_string(h.worst()));
  return rep;
}

}  // namespace opalg
