#pragma once

// Dense complex matrices, norms, spectra and the shared tolerance policy.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace opalg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr std::uint64_t kDefaultSeed = 20240611ULL;

/// Library error. `operation` names the failing operation, `kind` the
/// module-level error name (e.g. "NotPositive").
class Error : public std::runtime_error {
 public:
  Error(std::string operation, std::string kind, const std::string& detail)
      : std::runtime_error(operation + ": " + kind + (detail.empty() ? "" : " (" + detail + ")")),
        operation_(std::move(operation)),
        kind_(std::move(kind)) {}

  const std::string& operation() const noexcept { return operation_; }
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string operation_;
  std::string kind_;
};

/// Every "is zero" decision in the library goes through this.
/// effective = base_eps * max(1, norm) * dim.
struct Tolerance {
  double base_eps = 1e-10;

  double effective(double norm, std::size_t dim) const {
    return base_eps * std::max(1.0, norm) * static_cast<double>(std::max<std::size_t>(dim, 1));
  }
  double effective(const Matrix& a) const { return effective(a.norm(), static_cast<std::size_t>(a.rows())); }
};

struct Diagonalization {
  Matrix unitary;       // columns are orthonormal eigenvectors
  Vector eigenvalues;   // a = unitary * diag(eigenvalues) * unitary^*
};

struct SpectrumResult {
  std::vector<Complex> eigenvalues;  // sorted by (real, imag)
  std::vector<double> residuals;     // smallest singular value of a - lambda
  std::optional<Diagonalization> diagonalization;  // present when a is normal
};

struct Classification {
  bool selfadjoint = false;
  bool normal = false;
  bool unitary = false;
  bool projection = false;
  bool isometry = false;
  bool partial_isometry = false;
};

Matrix adjoint(const Matrix& a);
Matrix identity(std::size_t n);

double op_norm(const Matrix& a);
std::vector<double> singular_values(const Matrix& a);

SpectrumResult spectrum(const Matrix& a, const Tolerance& tol = {});
Classification classify(const Matrix& a, const Tolerance& tol = {});

bool is_normal(const Matrix& a, const Tolerance& tol = {});
bool is_projection(const Matrix& a, const Tolerance& tol = {});

/// Unitary diagonalization of a normal matrix through the complex Schur form.
/// Eigenvectors belonging to one eigenvalue cluster (radius = effective
/// tolerance) are re-orthonormalized.
Diagonalization diagonalize_normal(const Matrix& a, const Tolerance& tol = {});

/// Groups indices of `values` whose mutual distance chains stay within `radius`.
/// Clusters come back ordered by their first member after sorting by (real, imag).
std::vector<std::vector<std::size_t>> cluster_values(const std::vector<Complex>& values, double radius);

/// Numerical rank with a certified gap: kept singular values must exceed the
/// discarded ones by at least `gap`. Throws Error("numeric_rank", "RankGap").
std::size_t numeric_rank(const Matrix& a, double threshold, double gap);

/// Orthonormal basis of ker(a) (columns), singular-value threshold.
Matrix null_space(const Matrix& a, double threshold);

/// Hilbert-Schmidt inner product <x, y> = tr(x^* y).
Complex hs_inner(const Matrix& x, const Matrix& y);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix direct_sum(const Matrix& a, const Matrix& b);

void require_square(const Matrix& a, const char* operation);
void require_finite(const Matrix& a, const char* operation);

}  // namespace opalg
