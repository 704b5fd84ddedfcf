#pragma once

// The discrete imprimitivity bimodule C(G) between C(G/H) x G and C*(H).

#include <cstddef>
#include <memory>
#include <vector>

#include "opalg/crossed.hpp"

namespace opalg {

/// Module elements are coefficient vectors over the basis (eps_s)_{s in G}.
/// Left-algebra elements are coefficient vectors over e_{kH} x delta_s at
/// index s * cosets + k; right-algebra elements over (v_h)_{h in H}, in the
/// order of the sorted subgroup.
struct ImprimitivityBimodule {
  std::shared_ptr<const FiniteGroup> group;
  std::vector<std::size_t> subgroup;         // sorted indices of H
  std::vector<std::size_t> representatives;  // coset k -> smallest member
  std::vector<std::size_t> coset_of;         // s -> coset index
  std::vector<std::size_t> position;         // s -> index in H, or order() if s is not in H
  CrossedProduct left;                       // A0
  FDCAlgebra right;                          // B0 on l2(H)
  std::vector<Matrix> left_units;            // realization of e_{kH} x delta_s
  std::vector<Matrix> right_units;           // v_h on l2(H)
  double gram_min_eigenvalue_left = 0;
  double gram_min_eigenvalue_right = 0;

  std::size_t module_dim() const { return group->order(); }
  std::size_t cosets() const { return representatives.size(); }
  std::size_t left_dim() const { return cosets() * group->order(); }
  std::size_t right_dim() const { return subgroup.size(); }

  Vector inner_left(const Vector& x, const Vector& y) const;   // <x|y>_A, linear in x
  Vector inner_right(const Vector& x, const Vector& y) const;  // <x|y>_B, linear in y
  Vector left_act(const Vector& a, const Vector& x) const;
  Vector right_act(const Vector& x, const Vector& b) const;
  Vector left_adjoint(const Vector& a) const;
  Vector right_adjoint(const Vector& b) const;
  Matrix realize_left(const Vector& a) const;
  Matrix realize_right(const Vector& b) const;
};

/// Builds the bimodule and certifies both big Gram matrices
/// [<eps_s|eps_t>] positive semidefinite (error NotPositive).
ImprimitivityBimodule build_bimodule(const FiniteGroup& g, const std::vector<std::size_t>& subgroup,
                                     const Tolerance& tol = {});

struct AxiomReport {
  double left_sesquilinearity = 0;   // A-valued product: linear in the first slot, hermitian
  double right_sesquilinearity = 0;  // B-valued product: linear in the second slot, hermitian
  double left_adjointable = 0;       // <ax|y>_B = <x|a^*y>_B
  double right_adjointable = 0;      // <xb|y>_A = <x|yb^*>_A
  double associativity = 0;          // <x|y>_A z = x <y|z>_B
  double contractivity = 0;          // largest negative eigenvalue magnitude of ||a||^2<x|x> - <ax|ax>
  double norm_compatibility = 0;     // | ||<x|x>_A|| - ||<x|x>_B|| |
  double gram_left = 0;              // negative part of the big Gram spectra
  double gram_right = 0;
  std::size_t span_left = 0;         // rank of {<x|y>_A}
  std::size_t span_right = 0;
  bool full_left = false;
  bool full_right = false;
  double worst() const;
};

/// Basis-exhaustive checks plus `samples` random combinations.
AxiomReport verify_axioms(const ImprimitivityBimodule& bm, std::size_t samples = 16,
                          std::uint64_t seed = kDefaultSeed, const Tolerance& tol = {});

struct BlockCorrespondence {
  std::vector<BlockInfo> blocks_left;
  std::vector<BlockInfo> blocks_right;
  std::size_t irreps_of_subgroup = 0;
  std::vector<std::size_t> induced_ranks;  // rank of E z_j for each right block j
  bool matched = false;
};

BlockCorrespondence block_correspondence(const ImprimitivityBimodule& bm, const DecomposeOptions& opts = {},
                                         const Tolerance& tol = {});

}  // namespace opalg
