#pragma once

// Projections over finite-dimensional algebras, K0 as integer dimension
// vectors, Bratteli diagrams and the index-map formula.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "opalg/algebra.hpp"

namespace opalg {

using IntVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;
using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// A class in K0, as a per-block integer vector. `level` is the 1-based
/// Bratteli level it lives at, or 0 for a class over a decomposed algebra.
struct K0Class {
  std::size_t level = 0;
  IntVector vector;
  friend bool operator==(const K0Class& x, const K0Class& y) { return x.level == y.level && x.vector == y.vector; }
};

/// p = e e^* z^{-1} with z = 1 + (e - e^*)(e^* - e): a projection with the
/// same range as the idempotent e.
Matrix idempotent_to_projection(const Matrix& e, const Tolerance& tol = {});

/// Blocks of `a`, decomposing it first when it carries no decomposition.
std::vector<BlockInfo> blocks_of(const FDCAlgebra& a, const DecomposeOptions& opts = {}, const Tolerance& tol = {});

/// Per-block rank of a projection p in M_k(A), a (kN) x (kN) matrix:
/// rank((I_k (x) z_i) p (I_k (x) z_i)) / m_i.
IntVector dimension_vector(const FDCAlgebra& a, const std::vector<BlockInfo>& blocks, const Matrix& p,
                           const Tolerance& tol = {});

bool mvn_equivalent(const Matrix& p, const Matrix& q, const FDCAlgebra& a, const Tolerance& tol = {});
K0Class k0_class(const Matrix& p, const FDCAlgebra& a, const Tolerance& tol = {});

/// A *-homomorphism between two algebras, held as the images of the
/// domain's orthonormal basis.
struct Homomorphism {
  FDCAlgebra domain;
  FDCAlgebra codomain;
  std::vector<Matrix> images;

  Matrix operator()(const Matrix& x) const;

  /// Fits the linear map sending sources[k] to targets[k] (sources must span
  /// the domain) and certifies it as a *-homomorphism; unital maps are
  /// required to send 1 to 1 when `unital` is set.
  static Homomorphism fit(const FDCAlgebra& domain, const FDCAlgebra& codomain, const std::vector<Matrix>& sources,
                          const std::vector<Matrix>& targets, bool unital = true, const Tolerance& tol = {});
};

Homomorphism compose(const Homomorphism& second, const Homomorphism& first);

/// Column i = class of the image of a minimal projection of block i.
IntMatrix k0_of_hom(const Homomorphism& phi, std::uint64_t seed = kDefaultSeed, const Tolerance& tol = {});

/// Exact rank over the rationals (fraction-free elimination, overflow-checked).
std::size_t integer_rank(const IntMatrix& m);
/// Overflow-checked integer product.
IntMatrix int_multiply(const IntMatrix& a, const IntMatrix& b);
IntVector int_apply(const IntMatrix& a, const IntVector& v);

struct BratteliDiagram {
  std::vector<IntVector> levels;  // block sizes, level 1 first
  std::vector<IntMatrix> maps;    // maps[n] : level n+1 -> level n+2 (0-based storage)
  bool unital = false;

  std::size_t depth() const { return levels.size(); }
  /// Shapes, nonnegativity, and sizes(n+1) = M_n sizes(n) when unital.
  void validate() const;
  /// M_{2^n} for n = 0 .. num_levels-1 with multiplicity-2 maps.
  static BratteliDiagram car(std::size_t num_levels);
};

enum class Comparison { equal, distinct, undecided_at_horizon };
enum class Positivity { positive, not_positive, undecided_at_horizon };

const char* to_string(Comparison c);
const char* to_string(Positivity p);

inline constexpr std::size_t kDefaultHorizon = 8;

/// Push a class from its level to `target` (>= its level).
K0Class propagate(const BratteliDiagram& d, const K0Class& x, std::size_t target);

Comparison bratteli_k0_equal(const BratteliDiagram& d, const K0Class& x, const K0Class& y,
                             std::size_t horizon = kDefaultHorizon);
Positivity bratteli_k0_positive(const BratteliDiagram& d, const K0Class& x, std::size_t horizon = kDefaultHorizon);

/// [1 - v^*v] - [1 - vv^*] given the two defect classes.
K0Class index_map(const K0Class& defect_ker, const K0Class& defect_coker);

/// Same formula for a partial isometry v in M_k(A) whose image in the
/// quotient by the ideal (a set of block indices) is unitary. The result is
/// indexed by `ideal_blocks`.
K0Class index_map_matrix(const Matrix& v, const FDCAlgebra& a, const std::vector<std::size_t>& ideal_blocks,
                         const Tolerance& tol = {});

}  // namespace opalg
