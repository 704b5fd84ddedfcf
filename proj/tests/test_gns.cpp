#include <algorithm>

#include "opalg/gns.hpp"
#include "opalg/groups.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace opalg;
using namespace testing;

namespace {

Matrix random_density(Eigen::Index n, Rng& rng) {
  const Matrix x = random_matrix(n, n, rng);
  const Matrix rho = x * x.adjoint();
  return rho / rho.trace().real();
}

FDCAlgebra c2_plus_m2() {
  const std::vector<std::size_t> sizes{1, 1, 2}, mults{1, 1, 1};
  return block_diagonal_algebra(sizes, mults);
}

/// Gram rank of phi(b_i^* b_j) computed with the Jacobi oracle.
std::size_t oracle_gram_rank(const FDCAlgebra& a, const Matrix& rho) {
  const auto d = static_cast<Eigen::Index>(a.dim());
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      g(i, j) = oracle::multiply(rho, oracle::multiply(oracle::conj_transpose(a.basis()[static_cast<std::size_t>(i)]),
                                                       a.basis()[static_cast<std::size_t>(j)]))
                    .trace();
  std::size_t rank = 0;
  for (double ev : oracle::hermitian_eigenvalues(g)) rank += ev > 1e-9;
  return rank;
}

}  // namespace

TEST_CASE("states: validity") {
  const FDCAlgebra m2 = full_matrix_algebra(2);
  CHECK_NOTHROW(state_from_density(m2, identity(2) / 2.0));
  CHECK_NOTHROW(state_from_density(m2, diag({1, 0})));
  CHECK(error_kind([&] { state_from_density(m2, -identity(2) / 2.0); }) == "NotPositive");
  CHECK(error_kind([&] { state_from_density(m2, identity(2)); }) == "NotNormalized");
}

TEST_CASE("GNS: examples") {
  const FDCAlgebra m2 = full_matrix_algebra(2);
  const GNSResult tr = gns_construct(state_from_density(m2, identity(2) / 2.0));
  CHECK(tr.hilbert_dim == 4);
  CHECK(oracle_gram_rank(m2, identity(2) / 2.0) == 4);
  CHECK_FALSE(is_irreducible(tr.rep));
  CHECK(commutant(tr.rep.images, 4).dim() == 4);

  const GNSResult vec = gns_construct(state_from_density(m2, diag({1, 0})));
  CHECK(vec.hilbert_dim == 2);
  CHECK(oracle_gram_rank(m2, diag({1, 0})) == 2);
  CHECK(is_irreducible(vec.rep));
  CHECK(rep_decompose(vec.rep) == rep_decompose(identity_representation(m2)));

  const FDCAlgebra c2 = diagonal_algebra(2);
  CHECK(gns_construct(state_from_density(c2, diag({1, 0}))).hilbert_dim == 1);

  const std::vector<Matrix> gens{diag({1, 0})};
  const FDCAlgebra nonunital = FDCAlgebra::generate(2, gens, false);
  Vector v(1);
  v(0) = 1.0;
  CHECK(error_kind([&] { gns_construct(make_state(nonunital, v)); }) == "NonUnital");
}

TEST_CASE("irreducibility and decomposition") {
  const FDCAlgebra m2 = full_matrix_algebra(2);
  const Representation id = identity_representation(m2);
  CHECK(is_irreducible(id));
  CHECK_FALSE(is_irreducible(direct_sum(id, id)));
  const auto m3 = rep_decompose(identity_representation(full_matrix_algebra(3)));
  REQUIRE(m3.size() == 1);
  CHECK(m3[0] == IrrepMultiplicity{3, 1});

  const auto z3 = rep_decompose(identity_representation(regular_representation(FiniteGroup::cyclic(3))));
  CHECK(z3.size() == 3);
  for (const auto& b : z3) CHECK(b == IrrepMultiplicity{1, 1});

  auto s3 = rep_decompose(identity_representation(regular_representation(FiniteGroup::symmetric(3))));
  std::sort(s3.begin(), s3.end(), [](auto x, auto y) { return x.block_size < y.block_size; });
  REQUIRE(s3.size() == 3);
  CHECK(s3[0] == IrrepMultiplicity{1, 1});
  CHECK(s3[1] == IrrepMultiplicity{1, 1});
  CHECK(s3[2] == IrrepMultiplicity{2, 2});

  // not a homomorphism: scale every image by 2
  Representation bad = id;
  for (Matrix& m : bad.images) m *= 2.0;
  CHECK(error_kind([&] { is_irreducible(bad); }) == "NotAHomomorphism");

  // degenerate: b -> b (+) 0
  Representation zero{m2, std::vector<Matrix>(m2.dim(), Matrix::Zero(1, 1)), 1};
  CHECK(error_kind([&] { rep_decompose(direct_sum(id, zero)); }) == "Degenerate");
}

TEST_CASE("property: GNS reconstruction, cyclicity, uniqueness and Cauchy-Schwarz") {
  Rng rng(31);
  for (const FDCAlgebra& a : {full_matrix_algebra(2), full_matrix_algebra(3), c2_plus_m2()}) {
    const auto n = static_cast<Eigen::Index>(a.ambient_dim());
    for (int k = 0; k < 3; ++k) {
      const Matrix rho = k == 0 ? Matrix(identity(a.ambient_dim()) / static_cast<double>(n)) : random_density(n, rng);
      const State phi = state_from_density(a, rho);
      const GNSResult g = gns_construct(phi);
      CHECK(g.reconstruction_residual <= 1e-10);
      CHECK(g.cyclic_rank == g.hilbert_dim);
      CHECK(homomorphism_residual(g.rep).worst() <= 1e-10);
      CHECK(g.hilbert_dim == oracle_gram_rank(a, rho));
      CHECK(rep_decompose(g.rep) == rep_decompose(gns_construct(phi).rep));

      const bool single = rep_decompose(g.rep).size() == 1 && rep_decompose(g.rep)[0].multiplicity == 1;
      CHECK(is_irreducible(g.rep) == single);

      for (int t = 0; t < 5; ++t) {
        Vector cx(static_cast<Eigen::Index>(a.dim())), cy(static_cast<Eigen::Index>(a.dim()));
        for (Eigen::Index i = 0; i < cx.size(); ++i) {
          cx(i) = random_complex(rng);
          cy(i) = random_complex(rng);
        }
        const Matrix x = a.element(cx), y = a.element(cy);
        const double lhs = std::norm(phi(y.adjoint() * x));
        const double rhs = phi(x.adjoint() * x).real() * phi(y.adjoint() * y).real();
        CHECK(lhs <= rhs * (1 + 1e-10) + 1e-12);
      }
    }
  }
}
