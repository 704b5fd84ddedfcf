#pragma once

// *-subalgebras of M_N(C): generation, center, block (Wedderburn)
// decomposition, commutants and the double commutant check.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "opalg/kernels.hpp"
#include "opalg/matcore.hpp"

namespace opalg {

/// One simple summand M_n(C) of a decomposed algebra, occurring with
/// multiplicity m in the ambient space; z is its minimal central projection.
struct BlockInfo {
  std::size_t block_size = 0;
  std::size_t multiplicity = 0;
  Matrix central_projection;

  std::size_t rank() const { return block_size * multiplicity; }
};

/// A *-closed, product-closed subspace of M_N(C) held as a Hilbert-Schmidt
/// orthonormal basis. Immutable; copies share the basis and the lazily
/// computed structure constants.
class FDCAlgebra {
 public:
  /// Smallest *-algebra containing `generators` (and I when `unital`).
  static FDCAlgebra generate(std::size_t ambient_dim, std::span<const Matrix> generators, bool unital,
                             const Tolerance& tol = {});

  /// Span of `elements`, certified closed under product and adjoint.
  static FDCAlgebra from_span(std::size_t ambient_dim, std::span<const Matrix> elements,
                              const Tolerance& tol = {});

  /// The zero algebra inside M_0.
  FDCAlgebra();

  std::size_t ambient_dim() const;
  std::size_t dim() const;
  const std::vector<Matrix>& basis() const;
  /// Whether I_N lies in the span.
  bool unital() const;

  Vector coordinates(const Matrix& x) const;
  Matrix element(const Vector& coords) const;
  /// ||x - P_A x||_F, distance to the span.
  double membership_residual(const Matrix& x) const;

  const kernels::StructureConstants& structure() const;

  const std::optional<std::vector<BlockInfo>>& decomposition() const { return decomposition_; }
  FDCAlgebra with_decomposition(std::vector<BlockInfo> blocks) const;

 private:
  struct Data;
  explicit FDCAlgebra(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  static FDCAlgebra make(std::size_t ambient_dim, std::vector<Matrix> orthonormal_basis, const Tolerance& tol,
                         std::unique_ptr<kernels::StructureConstants> known = nullptr);

  std::shared_ptr<const Data> data_;
  std::optional<std::vector<BlockInfo>> decomposition_;

  friend FDCAlgebra commutant(std::span<const Matrix>, std::size_t, const Tolerance&);
};

/// Gram-Schmidt step: appends the normalized residual of `candidate` to
/// `basis` when it exceeds `threshold`; returns whether it was added.
bool extend_orthonormal(std::vector<Matrix>& basis, const Matrix& candidate, double threshold);

FDCAlgebra center(const FDCAlgebra& a, const Tolerance& tol = {});

struct DecomposeOptions {
  std::uint64_t seed = kDefaultSeed;
  int max_retries = 8;
};

/// Minimal central projections from a generic self-adjoint central element,
/// with block sizes n_i = sqrt(dim z_i A) and multiplicities rank(z_i)/n_i.
/// Sorted by (n, rank, rounded projection entries).
std::vector<BlockInfo> block_decompose(const FDCAlgebra& a, const DecomposeOptions& opts = {},
                                       const Tolerance& tol = {});
FDCAlgebra decompose(const FDCAlgebra& a, const DecomposeOptions& opts = {}, const Tolerance& tol = {});

/// Commutant of S ∪ S^* in M_N(C).
FDCAlgebra commutant(std::span<const Matrix> s, std::size_t ambient_dim, const Tolerance& tol = {});

struct DoubleCommutantReport {
  std::size_t dim_algebra = 0;
  std::size_t dim_commutant = 0;
  std::size_t dim_double_commutant = 0;
  double containment_residual = 0;
  bool holds = false;
};

DoubleCommutantReport double_commutant(const FDCAlgebra& a, const Tolerance& tol = {});
bool double_commutant_check(const FDCAlgebra& a, const Tolerance& tol = {});

/// A minimal projection of A inside block `block`: the top spectral
/// projection of a generic positive element of z A z.
Matrix minimal_projection(const FDCAlgebra& a, const BlockInfo& block, std::uint64_t seed = kDefaultSeed,
                          const Tolerance& tol = {});

/// Matrix units e_{ij} of one block, row-major (index i*n + j), built by the
/// polar parts of p_1 x p_j for a generic x and orthogonal minimal p_i.
std::vector<Matrix> matrix_units(const FDCAlgebra& a, const BlockInfo& block, std::uint64_t seed = kDefaultSeed,
                                 const Tolerance& tol = {});

/// ⊕_i (I_{m_i} ⊗ M_{n_i}) inside M_{sum n_i m_i}.
FDCAlgebra block_diagonal_algebra(std::span<const std::size_t> sizes, std::span<const std::size_t> multiplicities);
FDCAlgebra full_matrix_algebra(std::size_t n);
FDCAlgebra diagonal_algebra(std::size_t n);

}  // namespace opalg
