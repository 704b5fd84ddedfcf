#include <algorithm>

#include "opalg/matcore.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace opalg;
using namespace testing;

TEST_CASE("adjoint conjugates and transposes") {
  CHECK(adjoint(identity(2)).isApprox(identity(2)));
  CHECK(adjoint(mat({{0, 1}, {0, 0}})) == mat({{0, 0}, {1, 0}}));
  CHECK(adjoint(mat({{0, I}, {0, 0}})) == mat({{0, 0}, {-I, 0}}));
}

TEST_CASE("operator norm") {
  CHECK(op_norm(identity(3)) == doctest::Approx(1.0));
  CHECK(op_norm(diag({3, -1})) == doctest::Approx(3.0));
  const Matrix nil2 = mat({{0, 2}, {0, 0}});
  CHECK(op_norm(nil2) == doctest::Approx(oracle::operator_norm(nil2)));
  CHECK(op_norm(nil2) == doctest::Approx(2.0));
}

TEST_CASE("operator norm agrees with the Jacobi oracle on random matrices") {
  Rng rng(7);
  for (int k = 0; k < 30; ++k) {
    const Matrix a = random_matrix(1 + k % 6, 1 + k % 6, rng);
    CHECK(std::abs(op_norm(a) - oracle::operator_norm(a)) <= 1e-10 * std::max(1.0, op_norm(a)));
  }
}

TEST_CASE("spectrum of small matrices") {
  auto values = [](const Matrix& a) { return spectrum(a).eigenvalues; };
  const auto p = values(diag({1, 1, 0}));
  REQUIRE(p.size() == 3);
  CHECK(std::abs(p[0]) < 1e-12);
  CHECK(std::abs(p[1] - 1.0) < 1e-12);
  CHECK(std::abs(p[2] - 1.0) < 1e-12);

  const auto u = values(diag({1, I}));
  for (const Complex& z : u) CHECK(std::abs(std::abs(z) - 1.0) < 1e-12);

  const Matrix a = mat({{2, 1}, {1, 2}});
  const auto ev = values(a);
  const auto expected = oracle::eigenvalues_2x2(a);
  REQUIRE(ev.size() == 2);
  CHECK(std::abs(ev[0] - 1.0) < 1e-12);
  CHECK(std::abs(ev[1] - 3.0) < 1e-12);
  CHECK(std::abs(ev[0] - expected[0]) < 1e-12);
  CHECK(std::abs(ev[1] - expected[1]) < 1e-12);

  CHECK(error_kind([] { spectrum(Matrix::Zero(2, 3)); }) == "NonSquare");
}

TEST_CASE("classification") {
  const Classification id = classify(identity(3));
  CHECK((id.selfadjoint && id.normal && id.unitary && id.projection && id.isometry && id.partial_isometry));

  const Classification v = classify(mat({{0, 1}, {0, 0}}));
  CHECK(v.partial_isometry);
  CHECK_FALSE((v.selfadjoint || v.normal || v.unitary || v.projection || v.isometry));
  // v^* v is the projection onto e_2, by hand
  CHECK(oracle::multiply(oracle::conj_transpose(mat({{0, 1}, {0, 0}})), mat({{0, 1}, {0, 0}})) == diag({0, 1}));

  const Classification e = classify(mat({{1, 1}, {0, 0}}));
  CHECK_FALSE((e.selfadjoint || e.normal || e.unitary || e.projection || e.isometry || e.partial_isometry));
}

TEST_CASE("property: C*-identity and spectrum inside the norm disk") {
  Rng rng(11);
  for (int k = 0; k < 40; ++k) {
    const auto n = 1 + k % 8;
    const Matrix a = random_matrix(n, n, rng);
    const double na = op_norm(a);
    CHECK(std::abs(op_norm(a.adjoint() * a) - na * na) <= 1e-10 * na * na);
    for (const Complex& z : spectrum(a).eigenvalues) CHECK(std::abs(z) <= na * (1 + 1e-10));
  }
}

TEST_CASE("property: self-adjoint spectra are real and diagonalizations are exact") {
  Rng rng(12);
  for (int k = 0; k < 25; ++k) {
    const auto n = 1 + k % 7;
    const Matrix h = random_hermitian(n, rng);
    const SpectrumResult s = spectrum(h);
    const Tolerance tol;
    for (const Complex& z : s.eigenvalues) CHECK(std::abs(z.imag()) <= tol.effective(h));
    REQUIRE(s.diagonalization.has_value());
    const Diagonalization& d = *s.diagonalization;
    CHECK((h * d.unitary - d.unitary * d.eigenvalues.asDiagonal()).norm() <= tol.effective(h));
    CHECK((d.unitary.adjoint() * d.unitary - identity(static_cast<std::size_t>(n))).norm() <= tol.effective(h));

    const std::vector<double> oracle_ev = oracle::hermitian_eigenvalues(h);
    for (std::size_t i = 0; i < oracle_ev.size(); ++i) CHECK(std::abs(s.eigenvalues[i].real() - oracle_ev[i]) < 1e-9);
  }
}

TEST_CASE("normal matrices with repeated eigenvalues get a unitary diagonalizer") {
  Rng rng(13);
  const Matrix u = random_unitary(5, rng);
  const Matrix a = u * diag({2, 2, 2, I, I}) * u.adjoint();
  const Diagonalization d = diagonalize_normal(a);
  CHECK((d.unitary.adjoint() * d.unitary - identity(5)).norm() < 1e-10);
  CHECK((d.unitary * d.eigenvalues.asDiagonal() * d.unitary.adjoint() - a).norm() < 1e-10);
}

TEST_CASE("numeric rank and its gap certificate") {
  CHECK(numeric_rank(diag({1, 1, 0}), 1e-8, 0.0) == 2);
  CHECK(error_kind([] { numeric_rank(diag({1, 1e-7}), 1e-6, 1e3); }) == "RankGap");
  CHECK(null_space(diag({1, 0, 0}), 1e-10).cols() == 2);
}

TEST_CASE("kron and direct sum shapes") {
  CHECK(kron(identity(2), identity(3)).isApprox(identity(6)));
  const Matrix s = direct_sum(identity(2), 2.0 * identity(1));
  CHECK(s.rows() == 3);
  CHECK(s(2, 2) == Complex(2.0));
  CHECK(s(0, 2) == Complex(0.0));
}

TEST_CASE("non-finite input is rejected") {
  Matrix a = identity(2);
  a(0, 1) = std::nan("");
  CHECK(error_kind([&] { require_finite(a, "x"); }) == "NonFinite");
}
