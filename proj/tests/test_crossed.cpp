#include <algorithm>

#include "opalg/crossed.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace opalg;
using namespace testing;

namespace {

Matrix random_in(const FDCAlgebra& a, Rng& rng) {
  Vector c(static_cast<Eigen::Index>(a.dim()));
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = random_complex(rng);
  return a.element(c);
}

FDCAlgebra scalars() {
  const std::vector<Matrix> one{identity(1)};
  return FDCAlgebra::from_span(1, one);
}

}  // namespace

TEST_CASE("dynamical systems are certified") {
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  const FDCAlgebra m2 = full_matrix_algebra(2);
  const std::vector<Matrix> flip{identity(2), mat({{0, 1}, {1, 0}})};
  CHECK_NOTHROW(DynamicalSystem::from_unitaries(m2, z2, flip));
  const std::vector<Matrix> not_unitary{identity(2), mat({{2, 0}, {0, 1}})};
  CHECK(error_kind([&] { DynamicalSystem::from_unitaries(m2, z2, not_unitary); }) == "NotUnitary");
  const std::vector<Matrix> diag_gen{diag({1, 0})};
  const FDCAlgebra d2 = FDCAlgebra::generate(2, diag_gen, true);
  const Matrix hadamard = mat({{1, 1}, {1, -1}}) / std::sqrt(2.0);
  const std::vector<Matrix> leaves{identity(2), hadamard};
  CHECK(error_kind([&] { DynamicalSystem::from_unitaries(d2, z2, leaves); }) == "NotInvariant");
  // linear maps that are not automorphisms: scaling by 2 breaks multiplicativity and composition
  std::vector<Matrix> scaled{Matrix::Identity(2, 2), 2.0 * Matrix::Identity(2, 2)};
  CHECK(error_kind([&] { DynamicalSystem::from_maps(d2, z2, scaled); }) == "InvalidAction");
  std::vector<Matrix> bad_identity{2.0 * Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  CHECK(error_kind([&] { DynamicalSystem::from_maps(d2, z2, bad_identity); }) == "InvalidAction");
}

TEST_CASE("crossed product: examples") {
  for (const FiniteGroup& g : {FiniteGroup::cyclic(3), FiniteGroup::symmetric(3)}) {
    const CrossedProduct cp = build_crossed(DynamicalSystem::trivial(scalars(), g));
    CHECK(cp.algebra.dim() == g.order());
    std::vector<std::size_t> a, b;
    for (const BlockInfo& x : block_decompose(cp.algebra)) a.push_back(x.block_size);
    for (const BlockInfo& x : decompose_group_algebra(g)) b.push_back(x.block_size);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
  const CrossedProduct z3 = build_crossed(translation_system(FiniteGroup::cyclic(3)));
  CHECK(z3.algebra.dim() == 9);
  CHECK(oracle::span_rank(z3.tagged) == 9);

  const FDCAlgebra m2 = full_matrix_algebra(2);
  const CrossedProduct triv = build_crossed(DynamicalSystem::trivial(m2, FiniteGroup::trivial()));
  CHECK(triv.algebra.dim() == m2.dim());
  CHECK(block_decompose(triv.algebra).size() == 1);
}

TEST_CASE("property: crossed dimension and relations across the corpus") {
  Rng rng(51);
  for (const FiniteGroup& g : small_group_corpus()) {
    const CrossedProduct cp = build_crossed(translation_system(g));
    CHECK(cp.algebra.dim() == g.order() * g.order());
    CHECK(cp.relations.worst() <= 1e-10);

    // the realization agrees with the symbolic product on random elements
    std::vector<Matrix> x(g.order()), y(g.order());
    for (std::size_t s = 0; s < g.order(); ++s) {
      x[s] = random_in(cp.system.algebra, rng);
      y[s] = random_in(cp.system.algebra, rng);
    }
    const Matrix lhs = cp.realize(x) * cp.realize(y);
    CHECK((lhs - cp.realize(crossed_multiply(cp.system, x, y))).norm() <= 1e-10 * std::max(1.0, lhs.norm()));
    CHECK((Matrix(cp.realize(x).adjoint()) - cp.realize(crossed_adjoint(cp.system, x))).norm() <=
          1e-10 * std::max(1.0, lhs.norm()));
  }
}

TEST_CASE("Stone-von Neumann") {
  const auto z2 = stone_von_neumann_check(FiniteGroup::cyclic(2));
  CHECK(z2.is_single_block);
  CHECK(z2.block_size == 2);
  const auto z3 = stone_von_neumann_check(FiniteGroup::cyclic(3));
  CHECK(z3.passed);
  CHECK(z3.block_size == 3);
  CHECK(z3.matrix_unit_residual <= 1e-12);
  const auto s3 = stone_von_neumann_check(FiniteGroup::symmetric(3));
  CHECK(s3.passed);
  CHECK(s3.block_size == 6);
  for (const FiniteGroup& g : small_group_corpus()) {
    const auto r = stone_von_neumann_check(g);
    CHECK(r.passed);
    CHECK(r.block_size == g.order());
  }
}

TEST_CASE("conditional expectation") {
  Rng rng(52);
  for (const DynamicalSystem& sys :
       {DynamicalSystem::trivial(scalars(), FiniteGroup::cyclic(4)), translation_system(FiniteGroup::cyclic(3))}) {
    const CrossedProduct cp = build_crossed(sys);
    const DualAction beta = dual_action(cp);
    const FDCAlgebra& a = sys.algebra;
    // x = a (x) delta_e gives a; s != e gives 0
    const Matrix base = random_in(a, rng);
    CHECK((conditional_expectation(cp, beta, cp.embed(base, 0)) - base).norm() < 1e-12);
    for (std::size_t s = 1; s < sys.group->order(); ++s)
      CHECK(conditional_expectation(cp, beta, cp.embed(base, s)).norm() < 1e-12);
    for (int k = 0; k < 10; ++k) {
      const Matrix x = random_in(cp.algebra, rng);
      CHECK((conditional_expectation(cp, beta, x) - identity_coefficient(cp, x)).norm() <= 1e-12 * std::max(1.0, x.norm()));
    }
    CHECK(expectation_gram_rank(cp, beta) == cp.algebra.dim());
  }
  const CrossedProduct s3 = build_crossed(translation_system(FiniteGroup::symmetric(3)));
  CHECK(error_kind([&] { dual_action(s3); }) == "NonAbelian");
}

TEST_CASE("clock and shift") {
  const ClockShift pauli = clock_shift(2, 1);
  CHECK((pauli.clock - diag({1, -1})).norm() < 1e-15);
  CHECK((pauli.shift - mat({{0, 1}, {1, 0}})).norm() < 1e-15);
  CHECK((pauli.clock * pauli.shift + pauli.shift * pauli.clock).norm() < 1e-15);
  CHECK(error_kind([] { clock_shift(1, 1); }) == "InvalidArgument");
  CHECK_FALSE(clock_shift(4, 2).coprime);
  for (std::size_t q : {2, 3, 5, 7})
    for (long long p = 1; p < static_cast<long long>(q); ++p) {
      const ClockShift cs = clock_shift(q, p);
      CHECK(cs.coprime);
      CHECK((cs.clock * cs.shift - cs.omega * cs.shift * cs.clock).norm() < 1e-12);
      const std::vector<Matrix> gens{cs.clock, cs.shift};
      const FDCAlgebra a = FDCAlgebra::generate(q, gens, true);
      CHECK(a.dim() == q * q);
      const auto blocks = block_decompose(a);
      REQUIRE(blocks.size() == 1);
      CHECK(blocks[0].block_size == q);
    }
}

TEST_CASE("integrated forms of covariant pairs") {
  const FiniteGroup z3 = FiniteGroup::cyclic(3);
  const CrossedProduct cp = build_crossed(translation_system(z3));
  // the regular pair recovers the defining representation of the crossed product
  const Representation reg = integrate_covariant(cp, cp.pi, cp.lambda);
  for (std::size_t b = 0; b < cp.algebra.dim(); ++b) CHECK((reg.images[b] - cp.algebra.basis()[b]).norm() < 1e-10);

  // multiplication and translation on l2(G): image is all of M_|G|
  const auto lambda = left_regular_matrices(z3);
  const Representation mt = integrate_covariant(cp, cp.system.algebra.basis(), lambda);
  const FDCAlgebra image = FDCAlgebra::generate(3, mt.images, false);
  CHECK(image.dim() == 9);
  CHECK(homomorphism_residual(mt).worst() < 1e-10);

  // trivial group: integrated form is pi itself
  const FDCAlgebra m2 = full_matrix_algebra(2);
  const CrossedProduct triv = build_crossed(DynamicalSystem::trivial(m2, FiniteGroup::trivial()));
  const std::vector<Matrix> one{identity(2)};
  const Representation same = integrate_covariant(triv, m2.basis(), one);
  for (std::size_t b = 0; b < triv.algebra.dim(); ++b) CHECK((same(triv.algebra.basis()[b]) - triv.algebra.basis()[b]).norm() < 1e-10);

  // a non-covariant pair is rejected with its worst offender
  std::vector<Matrix> trivial_u(3, identity(3));
  const std::string kind = error_kind([&] { integrate_covariant(cp, cp.system.algebra.basis(), trivial_u); });
  CHECK(kind == "CovarianceViolation");
}
