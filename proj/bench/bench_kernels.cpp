// Serial reference vs OpenMP kernels on a few algebras of growing size.
// Usage: bench_kernels [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "opalg/crossed.hpp"

using namespace opalg;

namespace {

template <class F>
double seconds(int repeats, F&& f) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) f();
  const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
  return d.count() / repeats;
}

void run(const std::string& label, const FDCAlgebra& a, int repeats) {
  const auto& basis = a.basis();
  double diff = 0.0;
  const double serial_sc = seconds(repeats, [&] { kernels::serial::structure_constants(basis); });
  const double parallel_sc = seconds(repeats, [&] { kernels::parallel::structure_constants(basis); });
  {
    const auto s = kernels::serial::structure_constants(basis);
    const auto p = kernels::parallel::structure_constants(basis);
    for (std::size_t i = 0; i < s.product.size(); ++i) diff = std::max(diff, std::abs(s.product[i] - p.product[i]));
  }
  const double serial_cl = seconds(repeats, [&] { kernels::serial::closure_residual(basis); });
  const double parallel_cl = seconds(repeats, [&] { kernels::parallel::closure_residual(basis); });
  const double serial_pp = seconds(repeats, [&] { kernels::serial::pairwise_products(basis, basis); });
  const double parallel_pp = seconds(repeats, [&] { kernels::parallel::pairwise_products(basis, basis); });
  std::printf("%-22s dim %3zu in M_%-3zu | structure %8.4fs / %8.4fs | closure %8.4fs / %8.4fs | products %8.4fs / %8.4fs | max diff %.1e\n",
              label.c_str(), a.dim(), a.ambient_dim(), serial_sc, parallel_sc, serial_cl, parallel_cl, serial_pp,
              parallel_pp, diff);
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("threads: %d   (times are serial / parallel)\n", omp_get_max_threads());
  run("M_4", full_matrix_algebra(4), repeats);
  run("M_8", full_matrix_algebra(8), repeats);
  run("C(Z/6) x Z/6", build_crossed(translation_system(FiniteGroup::cyclic(6))).algebra, repeats);
  run("C(D4) x D4", build_crossed(translation_system(FiniteGroup::dihedral(4))).algebra, repeats);
  return 0;
}
