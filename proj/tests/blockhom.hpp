#pragma once

// Concrete *-homomorphisms between direct sums of full matrix algebras,
// built from a known multiplicity matrix so K0 maps have an exact oracle.

#include <cstddef>
#include <vector>

#include "opalg/algebra.hpp"
#include "opalg/ktheory.hpp"
#include "opalg/random.hpp"

namespace testing {

using opalg::Matrix;

/// ⊕ M_{sizes[i]} on the diagonal of M_{sum sizes}, each block once.
struct SumAlgebra {
  std::vector<std::size_t> sizes;
  opalg::FDCAlgebra algebra;

  explicit SumAlgebra(std::vector<std::size_t> s) : sizes(std::move(s)) {
    const std::vector<std::size_t> ones(sizes.size(), 1);
    algebra = opalg::block_diagonal_algebra(sizes, ones);
  }
  std::size_t ambient() const { return algebra.ambient_dim(); }
  std::size_t offset(std::size_t i) const {
    std::size_t o = 0;
    for (std::size_t k = 0; k < i; ++k) o += sizes[k];
    return o;
  }
  Matrix piece(const Matrix& x, std::size_t i) const {
    const auto o = static_cast<Eigen::Index>(offset(i)), n = static_cast<Eigen::Index>(sizes[i]);
    return x.block(o, o, n, n);
  }
  /// Which of our blocks a library central projection belongs to.
  std::size_t block_of(const Matrix& z) const {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const auto o = static_cast<Eigen::Index>(offset(i));
      if (std::abs(z(o, o) - 1.0) < 1e-6) return i;
    }
    return sizes.size();
  }
};

/// x -> ⊕_j U_j (⊕_i x_i^{(m_ji)} ⊕ 0) U_j^*, with U_j random block unitaries.
struct BlockHom {
  const SumAlgebra* domain;
  const SumAlgebra* codomain;
  opalg::IntMatrix multiplicity;  // codomain blocks x domain blocks, our ordering
  std::vector<Matrix> twist;

  Matrix operator()(const Matrix& x) const {
    const auto n = static_cast<Eigen::Index>(codomain->ambient());
    Matrix out = Matrix::Zero(n, n);
    for (std::size_t j = 0; j < codomain->sizes.size(); ++j) {
      const auto nj = static_cast<Eigen::Index>(codomain->sizes[j]);
      Matrix inner = Matrix::Zero(nj, nj);
      Eigen::Index at = 0;
      for (std::size_t i = 0; i < domain->sizes.size(); ++i)
        for (long long r = 0; r < multiplicity(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)); ++r) {
          const auto ni = static_cast<Eigen::Index>(domain->sizes[i]);
          inner.block(at, at, ni, ni) = domain->piece(x, i);
          at += ni;
        }
      const auto o = static_cast<Eigen::Index>(codomain->offset(j));
      out.block(o, o, nj, nj) = twist[j] * inner * twist[j].adjoint();
    }
    return out;
  }

  opalg::Homomorphism fit() const {
    std::vector<Matrix> targets;
    for (const Matrix& b : domain->algebra.basis()) targets.push_back((*this)(b));
    return opalg::Homomorphism::fit(domain->algebra, codomain->algebra, domain->algebra.basis(), targets, false);
  }
};

/// Random multiplicity matrix that fits: sum_i m_ji n_i <= N_j.
inline BlockHom random_block_hom(const SumAlgebra& dom, const SumAlgebra& cod, opalg::Rng& rng) {
  BlockHom h{&dom, &cod, opalg::IntMatrix::Zero(static_cast<Eigen::Index>(cod.sizes.size()),
                                                 static_cast<Eigen::Index>(dom.sizes.size())),
             {}};
  for (std::size_t j = 0; j < cod.sizes.size(); ++j) {
    std::size_t room = cod.sizes[j];
    for (int tries = 0; tries < 8; ++tries) {
      const std::size_t i = std::uniform_int_distribution<std::size_t>(0, dom.sizes.size() - 1)(rng);
      if (dom.sizes[i] <= room && std::bernoulli_distribution(0.7)(rng)) {
        h.multiplicity(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) += 1;
        room -= dom.sizes[i];
      }
    }
    h.twist.push_back(opalg::random_unitary(static_cast<Eigen::Index>(cod.sizes[j]), rng));
  }
  return h;
}

/// The multiplicity matrix reordered to the library's block order of both algebras.
inline opalg::IntMatrix in_library_order(const BlockHom& h) {
  const auto src = opalg::blocks_of(h.domain->algebra);
  const auto dst = opalg::blocks_of(h.codomain->algebra);
  opalg::IntMatrix out(static_cast<Eigen::Index>(dst.size()), static_cast<Eigen::Index>(src.size()));
  for (std::size_t r = 0; r < dst.size(); ++r)
    for (std::size_t c = 0; c < src.size(); ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          h.multiplicity(static_cast<Eigen::Index>(h.codomain->block_of(dst[r].central_projection)),
                         static_cast<Eigen::Index>(h.domain->block_of(src[c].central_projection)));
  return out;
}

}  // namespace testing
