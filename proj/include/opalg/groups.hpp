#pragma once

// Finite groups as multiplication tables, their group *-algebras, regular
// representations, and the Fourier picture for abelian groups.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "opalg/algebra.hpp"

namespace opalg {

/// table[s][t] = index of s*t. The identity is index 0.
class FiniteGroup {
 public:
  /// Validates identity at 0, closure, associativity and inverses.
  explicit FiniteGroup(std::vector<std::vector<std::size_t>> table, std::string name = "");

  std::size_t order() const { return table_.size(); }
  std::size_t mul(std::size_t s, std::size_t t) const { return table_[s][t]; }
  std::size_t inv(std::size_t s) const { return inverse_[s]; }
  static constexpr std::size_t identity() { return 0; }
  const std::vector<std::vector<std::size_t>>& table() const { return table_; }
  const std::string& name() const { return name_; }

  bool is_abelian() const;
  std::vector<std::vector<std::size_t>> conjugacy_classes() const;
  bool is_subgroup(const std::vector<std::size_t>& elements) const;
  /// Subgroup as a group in its own right; element k of the result is
  /// elements[k] (elements sorted, identity first).
  FiniteGroup subgroup(const std::vector<std::size_t>& elements) const;
  /// Every subgroup, each as a sorted index list.
  std::vector<std::vector<std::size_t>> subgroups() const;

  friend bool operator==(const FiniteGroup& x, const FiniteGroup& y) { return x.table_ == y.table_; }

  static FiniteGroup cyclic(std::size_t n);
  static FiniteGroup product(const FiniteGroup& g, const FiniteGroup& h);
  static FiniteGroup symmetric(std::size_t n);  // n <= 5
  static FiniteGroup dihedral(std::size_t n);   // order 2n
  static FiniteGroup quaternion();              // Q8
  static FiniteGroup trivial() { return cyclic(1); }

 private:
  std::vector<std::vector<std::size_t>> table_;
  std::vector<std::size_t> inverse_;
  std::string name_;
};

/// Built-in groups used by tests and the CLI corpus (all of order <= 8).
std::vector<FiniteGroup> small_group_corpus();

/// f : G -> C, an element of the group algebra C[G] = C_c(G).
struct GroupAlgebraElement {
  std::shared_ptr<const FiniteGroup> group;
  Vector coeffs;

  static GroupAlgebraElement delta(std::shared_ptr<const FiniteGroup> g, std::size_t s);
  static GroupAlgebraElement zero(std::shared_ptr<const FiniteGroup> g);
};

/// (f*g)(s) = sum_t f(st) g(t^{-1}).
GroupAlgebraElement convolve(const GroupAlgebraElement& f, const GroupAlgebraElement& g);
/// f^*(s) = conj(f(s^{-1})).
GroupAlgebraElement star(const GroupAlgebraElement& f);

/// lambda_s e_t = e_{st}, as |G| x |G| permutation matrices.
std::vector<Matrix> left_regular_matrices(const FiniteGroup& g);
Matrix left_regular_image(const FiniteGroup& g, const Vector& coeffs);

/// C*(G) realized as span{lambda_s}.
FDCAlgebra regular_representation(const FiniteGroup& g, const Tolerance& tol = {});

/// block_decompose of the regular algebra, cross-checked against the
/// conjugacy-class count and sum n_i^2 = |G|.
std::vector<BlockInfo> decompose_group_algebra(const FiniteGroup& g, const DecomposeOptions& opts = {},
                                               const Tolerance& tol = {});

struct Character {
  Vector values;  // values(s) = chi(s)
};

/// All characters of an abelian group from a simultaneous diagonalization
/// of the lambda_s. Sorted with the trivial character first, then by the
/// arguments of (chi(0), chi(1), ...) in [0, 2 pi).
std::vector<Character> dual_group(const FiniteGroup& g, std::uint64_t seed = kDefaultSeed, const Tolerance& tol = {});

/// f -> (sum_s f(s) chi(s))_chi.
Vector fourier_transform(const std::vector<Character>& dual, const Vector& f);

struct FourierReport {
  double multiplicativity = 0;  // transform(f*g) vs transform(f) transform(g)
  double star = 0;              // transform(f^*) vs conj(transform(f))
  double bijectivity = 0;       // ||C^* C / |G| - I||
  double max_residual = 0;
};

FourierReport fourier_iso_check(const FiniteGroup& g, std::size_t random_pairs = 16,
                                std::uint64_t seed = kDefaultSeed, const Tolerance& tol = {});

}  // namespace opalg
