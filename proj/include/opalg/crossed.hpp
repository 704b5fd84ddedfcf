#pragma once

// Finite group actions on finite-dimensional algebras, crossed products in
// the regular covariant representation, dual actions and clock/shift pairs.

#include <cstddef>
#include <memory>
#include <vector>

#include "opalg/gns.hpp"
#include "opalg/groups.hpp"

namespace opalg {

/// An action of a finite group by *-automorphisms. Stored as one linear map
/// per group element on the algebra's basis coordinates: column j of
/// maps[s] holds the coordinates of alpha_s(b_j).
struct DynamicalSystem {
  FDCAlgebra algebra;
  std::shared_ptr<const FiniteGroup> group;
  std::vector<Matrix> maps;

  Matrix apply(std::size_t s, const Matrix& a) const;  // alpha_s(a)

  /// alpha_s(a) = w_s a w_s^*.
  static DynamicalSystem from_unitaries(const FDCAlgebra& a, const FiniteGroup& g, const std::vector<Matrix>& w,
                                        const Tolerance& tol = {});
  /// Explicit coordinate maps, certified like the unitary encoding.
  static DynamicalSystem from_maps(const FDCAlgebra& a, const FiniteGroup& g, std::vector<Matrix> maps,
                                   const Tolerance& tol = {});
  static DynamicalSystem trivial(const FDCAlgebra& a, const FiniteGroup& g);
};

/// C(G) as the diagonal of M_|G| with G acting by left translation.
DynamicalSystem translation_system(const FiniteGroup& g, const Tolerance& tol = {});
/// C(G/H) with G permuting the left cosets. Coset k is labelled by
/// representatives[k], the smallest index in it.
DynamicalSystem coset_system(const FiniteGroup& g, const std::vector<std::size_t>& subgroup,
                             std::vector<std::size_t>* representatives = nullptr, const Tolerance& tol = {});

struct RelationResidual {
  double product = 0;  // (a x s)(b x t) against a alpha_s(b) x st
  double adjoint = 0;  // (a x s)^* against alpha_{s^-1}(a^*) x s^-1
  double worst() const { return std::max(product, adjoint); }
};

/// A x G inside M_{d |G|} acting on C^d (x) l2(G). Tagged basis element
/// (i, s) = b_i x delta_s sits at index s * dim(A) + i.
struct CrossedProduct {
  DynamicalSystem system;
  std::vector<Matrix> pi;      // regular covariant image of each b_i
  std::vector<Matrix> lambda;  // I_d (x) lambda_s
  std::vector<Matrix> tagged;  // pi(b_i) lambda(s)
  FDCAlgebra algebra;
  Matrix to_tagged;  // orthonormal coordinates -> tagged coefficients
  RelationResidual relations;

  std::size_t index(std::size_t i, std::size_t s) const { return s * system.algebra.dim() + i; }
  /// pi(a) lambda(s) for a in A.
  Matrix embed(const Matrix& a, std::size_t s) const;
  /// Sum_s pi(parts[s]) lambda(s).
  Matrix realize(const std::vector<Matrix>& parts) const;
  Vector tagged_coefficients(const Matrix& x) const;
};

CrossedProduct build_crossed(const DynamicalSystem& sys, const Tolerance& tol = {});

/// Symbolic product and adjoint of elements written as (a_s)_s.
std::vector<Matrix> crossed_multiply(const DynamicalSystem& sys, const std::vector<Matrix>& x,
                                     const std::vector<Matrix>& y);
std::vector<Matrix> crossed_adjoint(const DynamicalSystem& sys, const std::vector<Matrix>& x);

struct StoneVonNeumannReport {
  std::size_t group_order = 0;
  bool is_single_block = false;
  std::size_t block_size = 0;
  std::size_t multiplicity = 0;
  double matrix_unit_residual = 0;
  double relation_residual = 0;
  bool passed = false;
};

StoneVonNeumannReport stone_von_neumann_check(const FiniteGroup& g, const DecomposeOptions& opts = {},
                                              const Tolerance& tol = {});

/// beta_chi(a x delta_s) = chi(s) (a x delta_s), implemented by conjugation
/// with I_d (x) diag(chi(t)). Abelian groups only.
struct DualAction {
  std::vector<Character> characters;
  std::vector<Matrix> implementers;
  Matrix apply(std::size_t k, const Matrix& x) const;
};

DualAction dual_action(const CrossedProduct& cp, std::uint64_t seed = kDefaultSeed, const Tolerance& tol = {});

/// Average of the dual action; the result is pi(a) for some a in A, and a is returned.
Matrix conditional_expectation(const CrossedProduct& cp, const DualAction& beta, const Matrix& x);
/// Same map through the delta_e coefficient of x.
Matrix identity_coefficient(const CrossedProduct& cp, const Matrix& x);
/// Rank of (x, y) -> tr E(x^* y) on the tagged basis; full rank = faithful.
std::size_t expectation_gram_rank(const CrossedProduct& cp, const DualAction& beta, const Tolerance& tol = {});

struct ClockShift {
  Matrix clock;  // diag(1, w, ..., w^{q-1})
  Matrix shift;  // e_k -> e_{k+1 mod q}
  Complex omega;
  bool coprime = true;
};

/// clock * shift = omega * shift * clock with omega = exp(2 pi i p / q).
ClockShift clock_shift(std::size_t q, long long p);

/// (pi x U)(a x delta_s) = pi(a) U_s, with pi given on the basis of A.
/// Throws CovarianceViolation naming the worst (basis index, group element).
Representation integrate_covariant(const CrossedProduct& cp, const std::vector<Matrix>& pi,
                                   const std::vector<Matrix>& u, const Tolerance& tol = {});

}  // namespace opalg
