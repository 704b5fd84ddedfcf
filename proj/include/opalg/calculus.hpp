#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "opalg/matcore.hpp"

namespace opalg {

/// A scalar function for the functional calculus. `eval(z, radius)` returns
/// nullopt where the function is undefined; `radius` is the eigenvalue
/// clustering radius, used for closeness decisions (branch cuts, indicators).
struct ScalarFunction {
  std::string name;
  std::function<std::optional<Complex>(Complex, double)> eval;

  Complex operator()(Complex z) const { return eval(z, 0.0).value(); }

  static ScalarFunction identity();
  static ScalarFunction constant(Complex c);
  static ScalarFunction sqrt();  // on [0, inf)
  static ScalarFunction exp();
  static ScalarFunction exp_it(double t);  // lambda -> exp(i t lambda)
  static ScalarFunction log();             // principal branch off (-inf, 0]
  static ScalarFunction abs();
  static ScalarFunction conj();
  static ScalarFunction indicator(std::vector<Complex> points);  // 1 near a listed point, else 0
  static ScalarFunction by_name(const std::string& name, double t = 1.0);
};

enum class RadiusMethod { eig, power_norm };

/// max |lambda| (eig) or ||a^n||^{1/n} with n a power of two (power_norm).
double spectral_radius(const Matrix& a, RadiusMethod method, std::size_t n_max = 32,
                       const Tolerance& tol = {});

bool is_positive(const Matrix& a, const Tolerance& tol = {});

/// Unique positive square root; eigenvalues in [-tol, 0) are clamped to 0.
Matrix sqrt_positive(const Matrix& a, const Tolerance& tol = {});

/// U f(Lambda) U^* for normal a. f is evaluated once per eigenvalue cluster,
/// at the cluster mean.
Matrix func_calc(const Matrix& a, const ScalarFunction& f, const Tolerance& tol = {});

/// a (a^* a)^{-1/2} for invertible a.
Matrix polar_unitary(const Matrix& a, const Tolerance& tol = {});

}  // namespace opalg
