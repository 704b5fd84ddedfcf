#pragma once

// States, the GNS construction, and decomposition of representations.

#include <utility>
#include <vector>

#include "opalg/algebra.hpp"

namespace opalg {

/// A positive functional given by its values on the algebra's stored
/// orthonormal basis.
struct State {
  FDCAlgebra algebra;
  Vector values;

  Complex operator()(const Matrix& x) const { return (algebra.coordinates(x).array() * values.array()).sum(); }
};

/// G_ij = phi(b_i^* b_j).
Matrix state_gram(const FDCAlgebra& a, const Vector& values);

State make_state(const FDCAlgebra& a, const Vector& values, const Tolerance& tol = {});
/// phi(x) = tr(rho x), certified like any other state.
State state_from_density(const FDCAlgebra& a, const Matrix& rho, const Tolerance& tol = {});

/// A linear map on the algebra given by the images of its basis.
struct Representation {
  FDCAlgebra algebra;
  std::vector<Matrix> images;
  std::size_t dim = 0;

  Matrix operator()(const Matrix& x) const;
};

Representation identity_representation(const FDCAlgebra& a);
Representation direct_sum(const Representation& x, const Representation& y);

struct HomomorphismResidual {
  double product = 0;  // max ||pi(b_i) pi(b_j) - pi(b_i b_j)||_F
  double adjoint = 0;  // max ||pi(b_i)^* - pi(b_i^*)||_F
  double worst() const { return std::max(product, adjoint); }
};

HomomorphismResidual homomorphism_residual(const Representation& rep);

struct GNSResult {
  std::size_t hilbert_dim = 0;
  Representation rep;
  Vector cyclic_vector;
  Matrix gram;
  double reconstruction_residual = 0;
  std::size_t cyclic_rank = 0;  // rank of {pi(b) Omega}
};

GNSResult gns_construct(const State& phi, const Tolerance& tol = {});

bool is_irreducible(const Representation& rep, const Tolerance& tol = {});

struct IrrepMultiplicity {
  std::size_t block_size = 0;
  std::size_t multiplicity = 0;
  friend bool operator==(const IrrepMultiplicity&, const IrrepMultiplicity&) = default;
};

std::vector<IrrepMultiplicity> rep_decompose(const Representation& rep, const DecomposeOptions& opts = {},
                                             const Tolerance& tol = {});

}  // namespace opalg
