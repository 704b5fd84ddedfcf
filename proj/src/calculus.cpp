#include "opalg/calculus.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace opalg {

namespace {

ScalarFunction total(std::string name, std::function<Complex(Complex)> g) {
  return {std::move(name), [g = std::move(g)](Complex z, double) -> std::optional<Complex> { return g(z); }};
}

}  // namespace

ScalarFunction ScalarFunction::identity() {
  return total("id", [](Complex z) { return z; });
}

ScalarFunction ScalarFunction::constant(Complex c) {
  return total("const", [c](Complex) { return c; });
}

ScalarFunction ScalarFunction::sqrt() {
  return {"sqrt", [](Complex z, double eps) -> std::optional<Complex> {
            if (std::abs(z.imag()) > eps || z.real() < -eps) return std::nullopt;
            return Complex(std::sqrt(std::max(0.0, z.real())), 0.0);
          }};
}

ScalarFunction ScalarFunction::exp() {
  return total("exp", [](Complex z) { return std::exp(z); });
}

ScalarFunction ScalarFunction::exp_it(double t) {
  return total("exp_it", [t](Complex z) { return std::exp(Complex(0.0, t) * z); });
}

ScalarFunction ScalarFunction::log() {
  return {"log", [](Complex z, double eps) -> std::optional<Complex> {
            if (z.real() <= eps && std::abs(z.imag()) <= eps) return std::nullopt;
            return std::log(z);
          }};
}

ScalarFunction ScalarFunction::abs() {
  return total("abs", [](Complex z) { return Complex(std::abs(z), 0.0); });
}

ScalarFunction ScalarFunction::conj() {
  return total("conj", [](Complex z) { return std::conj(z); });
}

ScalarFunction ScalarFunction::indicator(std::vector<Complex> points) {
  return {"indicator", [pts = std::move(points)](Complex z, double eps) -> std::optional<Complex> {
            const double r = std::max(eps, 1e-9);
            for (const Complex& p : pts)
              if (std::abs(z - p) <= r) return Complex(1.0);
            return Complex(0.0);
          }};
}

ScalarFunction ScalarFunction::by_name(const std::string& name, double t) {
  if (name == "id") return identity();
  if (name == "sqrt") return sqrt();
  if (name == "exp") return exp();
  if (name == "exp_it") return exp_it(t);
  if (name == "log") return log();
  if (name == "abs") return abs();
  if (name == "conj") return conj();
  throw Error("func_calc", "UnknownFunction", name);
}

double spectral_radius(const Matrix& a, RadiusMethod method, std::size_t n_max, const Tolerance& tol) {
  require_square(a, "spectral_radius");
  if (method == RadiusMethod::eig) {
    const SpectrumResult s = spectrum(a, tol);
    double r = 0.0;
    for (const Complex& z : s.eigenvalues) r = std::max(r, std::abs(z));
    return r;
  }
  if (n_max < 1) throw Error("spectral_radius", "InvalidArgument", "n_max < 1");
  if ((n_max & (n_max - 1)) != 0) throw Error("spectral_radius", "InvalidArgument", "n_max must be a power of two");

  // ||a^{2^k}||^{1/2^k} by repeated squaring. Invariant: a^n = exp(log_scale) * p.
  // The running power is rescaled each step so norms cannot overflow.
  Matrix p = a;
  double log_scale = 0.0;
  std::size_t n = 1;
  while (n < n_max) {
    const double s = p.norm();
    if (s == 0.0) return 0.0;
    p /= s;
    log_scale = 2.0 * (log_scale + std::log(s));
    p = (p * p).eval();
    n *= 2;
  }
  const double norm = op_norm(p);
  if (norm == 0.0) return 0.0;
  return std::exp((log_scale + std::log(norm)) / static_cast<double>(n));
}

bool is_positive(const Matrix& a, const Tolerance& tol) {
  if (a.rows() != a.cols()) return false;
  const double eps = tol.effective(a);
  if ((a - a.adjoint()).norm() > eps) return false;
  if (a.rows() == 0) return true;
  const Matrix h = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) >= -eps;
}

Matrix sqrt_positive(const Matrix& a, const Tolerance& tol) {
  require_square(a, "sqrt_positive");
  if (!is_positive(a, tol)) throw Error("sqrt_positive", "NotPositive", "");
  const Matrix h = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Eigen::VectorXd roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

Matrix func_calc(const Matrix& a, const ScalarFunction& f, const Tolerance& tol) {
  require_square(a, "func_calc");
  if (!is_normal(a, tol)) throw Error("func_calc", "NotNormal", "");
  const Diagonalization d = diagonalize_normal(a, tol);
  const double radius = tol.effective(a);
  const auto n = static_cast<std::size_t>(a.rows());

  std::vector<Complex> vals(d.eigenvalues.data(), d.eigenvalues.data() + n);
  Vector fvals(static_cast<Eigen::Index>(n));
  for (const auto& cluster : cluster_values(vals, radius)) {
    Complex mean(0.0);
    for (std::size_t k : cluster) mean += vals[k];
    mean /= static_cast<double>(cluster.size());
    const std::optional<Complex> value = f.eval(mean, radius);
    if (!value) {
      throw Error("func_calc", "UndefinedOnSpectrum", f.name + " at " + std::to_string(mean.real()) + "+" +
                                                           std::to_string(mean.imag()) + "i");
    }
    const Complex fz = *value;
    if (!std::isfinite(fz.real()) || !std::isfinite(fz.imag()))
      throw Error("func_calc", "UndefinedOnSpectrum", f.name + " not finite");
    for (std::size_t k : cluster) fvals(static_cast<Eigen::Index>(k)) = fz;
  }
  return d.unitary * fvals.asDiagonal() * d.unitary.adjoint();
}

Matrix polar_unitary(const Matrix& a, const Tolerance& tol) {
  require_square(a, "polar_unitary");
  const auto sv = singular_values(a);
  if (sv.empty() || sv.back() <= tol.effective(a)) throw Error("polar_unitary", "Singular", "");
  const Matrix h = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
  Eigen::VectorXd inv_roots = es.eigenvalues().cwiseSqrt().cwiseInverse();
  const Matrix inv_abs = es.eigenvectors() * inv_roots.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  return a * inv_abs;
}

}  // namespace opalg
