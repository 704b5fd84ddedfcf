#include "opalg/morita.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "opalg/random.hpp"

namespace opalg {

namespace {

using Index = Eigen::Index;

Index ix(std::size_t i) { return static_cast<Index>(i); }

double min_eigenvalue(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

Vector ImprimitivityBimodule::inner_left(const Vector& x, const Vector& y) const {
  const FiniteGroup& g = *group;
  Vector out = Vector::Zero(ix(left_dim()));
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t t = 0; t < g.order(); ++t)
      out(ix(g.mul(s, g.inv(t)) * cosets() + coset_of[s])) += x(ix(s)) * std::conj(y(ix(t)));
  return out;
}

Vector ImprimitivityBimodule::inner_right(const Vector& x, const Vector& y) const {
  const FiniteGroup& g = *group;
  Vector out = Vector::Zero(ix(right_dim()));
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t t = 0; t < g.order(); ++t) {
      const std::size_t h = g.mul(g.inv(s), t);
      if (position[h] < right_dim()) out(ix(position[h])) += std::conj(x(ix(s))) * y(ix(t));
    }
  return out;
}

Vector ImprimitivityBimodule::left_act(const Vector& a, const Vector& x) const {
  const FiniteGroup& g = *group;
  Vector out = Vector::Zero(ix(module_dim()));
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t k = 0; k < cosets(); ++k) {
      const Complex c = a(ix(s * cosets() + k));
      if (c == Complex(0.0)) continue;
      for (std::size_t t = 0; t < g.order(); ++t) {
        const std::size_t st = g.mul(s, t);
        if (coset_of[st] == k) out(ix(st)) += c * x(ix(t));
      }
    }
  return out;
}

Vector ImprimitivityBimodule::right_act(const Vector& x, const Vector& b) const {
  const FiniteGroup& g = *group;
  Vector out = Vector::Zero(ix(module_dim()));
  for (std::size_t t = 0; t < g.order(); ++t)
    for (std::size_t k = 0; k < right_dim(); ++k) out(ix(g.mul(t, subgroup[k]))) += x(ix(t)) * b(ix(k));
  return out;
}

Vector ImprimitivityBimodule::left_adjoint(const Vector& a) const {
  // (e_{rH} x delta_s)^* = e_{s^-1 rH} x delta_{s^-1}
  const FiniteGroup& g = *group;
  Vector out = Vector::Zero(ix(left_dim()));
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t k = 0; k < cosets(); ++k) {
      const std::size_t si = g.inv(s);
      const std::size_t moved = coset_of[g.mul(si, representatives[k])];
      out(ix(si * cosets() + moved)) += std::conj(a(ix(s * cosets() + k)));
    }
  return out;
}

Vector ImprimitivityBimodule::right_adjoint(const Vector& b) const {
  const FiniteGroup& g = *group;
  Vector out(ix(right_dim()));
  for (std::size_t k = 0; k < right_dim(); ++k) out(ix(position[g.inv(subgroup[k])])) = std::conj(b(ix(k)));
  return out;
}

Matrix ImprimitivityBimodule::realize_left(const Vector& a) const {
  const auto n = ix(left.algebra.ambient_dim());
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < left_units.size(); ++i)
    if (a(ix(i)) != Complex(0.0)) out += a(ix(i)) * left_units[i];
  return out;
}

Matrix ImprimitivityBimodule::realize_right(const Vector& b) const {
  const auto n = ix(right_dim());
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < right_units.size(); ++k) out += b(ix(k)) * right_units[k];
  return out;
}

ImprimitivityBimodule build_bimodule(const FiniteGroup& g, const std::vector<std::size_t>& subgroup,
                                     const Tolerance& tol) {
  const char* op = "build_bimodule";
  if (!g.is_subgroup(subgroup)) throw Error(op, "NotASubgroup", "");
  ImprimitivityBimodule bm;
  bm.group = std::make_shared<const FiniteGroup>(g);
  bm.subgroup = subgroup;
  std::sort(bm.subgroup.begin(), bm.subgroup.end());
  bm.subgroup.erase(std::unique(bm.subgroup.begin(), bm.subgroup.end()), bm.subgroup.end());
  const std::size_t n = g.order();
  bm.position.assign(n, n);
  for (std::size_t k = 0; k < bm.subgroup.size(); ++k) bm.position[bm.subgroup[k]] = k;

  bm.left = build_crossed(coset_system(g, bm.subgroup, &bm.representatives, tol), tol);
  bm.coset_of.assign(n, 0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t k = 0; k < bm.cosets(); ++k)
      if (bm.position[g.mul(g.inv(bm.representatives[k]), s)] < n) bm.coset_of[s] = k;

  const std::size_t c = bm.cosets();
  bm.left_units.resize(bm.left_dim());
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t k = 0; k < c; ++k) {
      Matrix e = Matrix::Zero(ix(c), ix(c));
      e(ix(k), ix(k)) = 1.0;
      bm.left_units[s * c + k] = bm.left.embed(e, s);
    }

  const FiniteGroup h = g.subgroup(bm.subgroup);
  bm.right_units = left_regular_matrices(h);
  bm.right = FDCAlgebra::generate(h.order(), bm.right_units, /*unital=*/true, tol);

  // Big Gram matrices [<eps_s|eps_t>]_{s,t} over M_|G| of each algebra.
  const std::size_t la = bm.left.algebra.ambient_dim(), lb = bm.right_dim();
  Matrix gram_a(ix(n * la), ix(n * la)), gram_b(ix(n * lb), ix(n * lb));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      Vector es = Vector::Zero(ix(n)), et = Vector::Zero(ix(n));
      es(ix(s)) = 1.0;
      et(ix(t)) = 1.0;
      gram_a.block(ix(s * la), ix(t * la), ix(la), ix(la)) = bm.realize_left(bm.inner_left(es, et));
      gram_b.block(ix(s * lb), ix(t * lb), ix(lb), ix(lb)) = bm.realize_right(bm.inner_right(es, et));
    }
  bm.gram_min_eigenvalue_left = min_eigenvalue(gram_a);
  bm.gram_min_eigenvalue_right = min_eigenvalue(gram_b);
  if (bm.gram_min_eigenvalue_left < -tol.effective(gram_a) || bm.gram_min_eigenvalue_right < -tol.effective(gram_b))
    throw Error(op, "NotPositive",
                "gram minima " + std::to_string(bm.gram_min_eigenvalue_left) + ", " +
                    std::to_string(bm.gram_min_eigenvalue_right));
  return bm;
}

double AxiomReport::worst() const {
  return std::max({left_sesquilinearity, right_sesquilinearity, left_adjointable, right_adjointable, associativity,
                   contractivity, norm_compatibility, gram_left, gram_right});
}

AxiomReport verify_axioms(const ImprimitivityBimodule& bm, std::size_t samples, std::uint64_t seed,
                          const Tolerance& tol) {
  const std::size_t n = bm.module_dim(), la = bm.left_dim(), lb = bm.right_dim();
  auto unit = [](std::size_t size, std::size_t i) {
    Vector v = Vector::Zero(ix(size));
    v(ix(i)) = 1.0;
    return v;
  };
  auto inf = [](const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); };
  AxiomReport rep;

  // Hermitian symmetry on basis pairs.
  rep.left_sesquilinearity = kernels::max_over(n * n, [&](std::size_t st) {
    const Vector x = unit(n, st / n), y = unit(n, st % n);
    return inf(bm.left_adjoint(bm.inner_left(x, y)) - bm.inner_left(y, x));
  });
  rep.right_sesquilinearity = kernels::max_over(n * n, [&](std::size_t st) {
    const Vector x = unit(n, st / n), y = unit(n, st % n);
    return inf(bm.right_adjoint(bm.inner_right(x, y)) - bm.inner_right(y, x));
  });
  rep.left_adjointable = kernels::max_over(la * n * n, [&](std::size_t idx) {
    const Vector a = unit(la, idx / (n * n)), x = unit(n, (idx / n) % n), y = unit(n, idx % n);
    return inf(bm.inner_right(bm.left_act(a, x), y) - bm.inner_right(x, bm.left_act(bm.left_adjoint(a), y)));
  });
  rep.right_adjointable = kernels::max_over(lb * n * n, [&](std::size_t idx) {
    const Vector b = unit(lb, idx / (n * n)), x = unit(n, (idx / n) % n), y = unit(n, idx % n);
    return inf(bm.inner_left(bm.right_act(x, b), y) - bm.inner_left(x, bm.right_act(y, bm.right_adjoint(b))));
  });
  rep.associativity = kernels::max_over(n * n * n, [&](std::size_t idx) {
    const Vector x = unit(n, idx / (n * n)), y = unit(n, (idx / n) % n), z = unit(n, idx % n);
    return inf(bm.left_act(bm.inner_left(x, y), z) - bm.right_act(x, bm.inner_right(y, z)));
  });

  Rng rng(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    const Vector x = random_matrix(ix(n), 1, rng), y = random_matrix(ix(n), 1, rng), z = random_matrix(ix(n), 1, rng);
    const Vector a = random_matrix(ix(la), 1, rng), b = random_matrix(ix(lb), 1, rng);
    const Complex alpha = random_complex(rng), beta = random_complex(rng);
    const Vector mix = alpha * x + beta * y;

    rep.left_sesquilinearity = std::max(
        {rep.left_sesquilinearity,
         inf(bm.inner_left(mix, z) - alpha * bm.inner_left(x, z) - beta * bm.inner_left(y, z)),
         inf(bm.inner_left(z, mix) - std::conj(alpha) * bm.inner_left(z, x) - std::conj(beta) * bm.inner_left(z, y)),
         inf(bm.left_adjoint(bm.inner_left(x, y)) - bm.inner_left(y, x))});
    rep.right_sesquilinearity = std::max(
        {rep.right_sesquilinearity,
         inf(bm.inner_right(z, mix) - alpha * bm.inner_right(z, x) - beta * bm.inner_right(z, y)),
         inf(bm.inner_right(mix, z) - std::conj(alpha) * bm.inner_right(x, z) - std::conj(beta) * bm.inner_right(y, z)),
         inf(bm.right_adjoint(bm.inner_right(x, y)) - bm.inner_right(y, x))});
    rep.left_adjointable = std::max(
        rep.left_adjointable,
        inf(bm.inner_right(bm.left_act(a, x), y) - bm.inner_right(x, bm.left_act(bm.left_adjoint(a), y))));
    rep.right_adjointable = std::max(
        rep.right_adjointable,
        inf(bm.inner_left(bm.right_act(x, b), y) - bm.inner_left(x, bm.right_act(y, bm.right_adjoint(b)))));
    rep.associativity =
        std::max(rep.associativity, inf(bm.left_act(bm.inner_left(x, y), z) - bm.right_act(x, bm.inner_right(y, z))));

    const double norm_a = op_norm(bm.realize_left(a)), norm_b = op_norm(bm.realize_right(b));
    const Vector ax = bm.left_act(a, x), xb = bm.right_act(x, b);
    const Matrix right_gap =
        norm_a * norm_a * bm.realize_right(bm.inner_right(x, x)) - bm.realize_right(bm.inner_right(ax, ax));
    const Matrix left_gap =
        norm_b * norm_b * bm.realize_left(bm.inner_left(x, x)) - bm.realize_left(bm.inner_left(xb, xb));
    rep.contractivity = std::max({rep.contractivity, -min_eigenvalue(right_gap), -min_eigenvalue(left_gap)});

    rep.norm_compatibility =
        std::max(rep.norm_compatibility, std::abs(op_norm(bm.realize_left(bm.inner_left(x, x))) -
                                                  op_norm(bm.realize_right(bm.inner_right(x, x)))));
  }

  Matrix span_a(ix(la), ix(n * n)), span_b(ix(lb), ix(n * n));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      span_a.col(ix(s * n + t)) = bm.inner_left(unit(n, s), unit(n, t));
      span_b.col(ix(s * n + t)) = bm.inner_right(unit(n, s), unit(n, t));
    }
  rep.span_left = numeric_rank(span_a, tol.effective(span_a), 0.0);
  rep.span_right = numeric_rank(span_b, tol.effective(span_b), 0.0);
  rep.full_left = rep.span_left == la;
  rep.full_right = rep.span_right == lb;
  rep.gram_left = std::max(0.0, -bm.gram_min_eigenvalue_left);
  rep.gram_right = std::max(0.0, -bm.gram_min_eigenvalue_right);
  return rep;
}

BlockCorrespondence block_correspondence(const ImprimitivityBimodule& bm, const DecomposeOptions& opts,
                                         const Tolerance& tol) {
  BlockCorrespondence out;
  out.blocks_left = block_decompose(bm.left.algebra, opts, tol);
  out.blocks_right = block_decompose(bm.right, opts, tol);
  out.irreps_of_subgroup = bm.group->subgroup(bm.subgroup).conjugacy_classes().size();
  const std::size_t n = bm.module_dim(), lb = bm.right_dim();
  for (const BlockInfo& block : out.blocks_right) {
    // coefficients of z_j in the v_h basis, then E z_j as a matrix on l2(G)
    Vector coeffs(ix(lb));
    for (std::size_t k = 0; k < lb; ++k)
      coeffs(ix(k)) = (bm.right_units[k].adjoint() * block.central_projection).trace() / static_cast<double>(lb);
    Matrix action(ix(n), ix(n));
    for (std::size_t t = 0; t < n; ++t) {
      Vector e = Vector::Zero(ix(n));
      e(ix(t)) = 1.0;
      action.col(ix(t)) = bm.right_act(e, coeffs);
    }
    out.induced_ranks.push_back(numeric_rank(action, tol.effective(action), 0.0));
  }
  out.matched = out.blocks_left.size() == out.blocks_right.size();
  return out;
}

}  // namespace opalg
