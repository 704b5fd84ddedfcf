// Acceptance run: one PASS/FAIL line per criterion with the measured values.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <Eigen/LU>

#include "blockhom.hpp"
#include "cli.hpp"
#include "opalg/calculus.hpp"
#include "opalg/crossed.hpp"
#include "opalg/gns.hpp"
#include "opalg/groups.hpp"
#include "opalg/ktheory.hpp"
#include "opalg/morita.hpp"
#include "oracles.hpp"

using namespace opalg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.size() < 400) detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

Matrix random_in(const FDCAlgebra& a, Rng& rng) {
  Vector c(static_cast<Eigen::Index>(a.dim()));
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = random_complex(rng);
  return a.element(c);
}

std::vector<std::size_t> sorted_sizes(const std::vector<BlockInfo>& blocks) {
  std::vector<std::size_t> s;
  for (const BlockInfo& b : blocks) s.push_back(b.block_size);
  std::sort(s.begin(), s.end());
  return s;
}

std::vector<std::pair<std::size_t, std::size_t>> shape(const std::vector<BlockInfo>& blocks) {
  std::vector<std::pair<std::size_t, std::size_t>> s;
  for (const BlockInfo& b : blocks) s.emplace_back(b.block_size, b.multiplicity);
  std::sort(s.begin(), s.end());
  return s;
}

IntVector ints(std::initializer_list<long long> v) {
  IntVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (long long x : v) out(k++) = x;
  return out;
}

FDCAlgebra scalars() {
  const std::vector<Matrix> one{identity(1)};
  return FDCAlgebra::from_span(1, one);
}

// 1
Outcome c_star_identity() {
  Outcome o;
  Rng rng(1001);
  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = 1 + k % 8;
    const Matrix a = random_matrix(n, n, rng);
    const double na = op_norm(a);
    worst = std::max(worst, std::abs(op_norm(a.adjoint() * a) - na * na) / (na * na));
  }
  o.require(worst <= 1e-10, "relative error " + fmt(worst));
  o.detail = o.detail.empty() ? "max relative error " + fmt(worst) : o.detail;
  return o;
}

// 2
Outcome spectral_radius_check() {
  Outcome o;
  Rng rng(1002);
  double eig_gap = 0, power_gap = 0;
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = 1 + k % 8;
    const Matrix h = random_hermitian(n, rng);
    const double norm = op_norm(h);
    double top = 0;
    for (const Complex& z : spectrum(h).eigenvalues) top = std::max(top, std::abs(z));
    eig_gap = std::max(eig_gap, std::abs(top - norm));
    const double eig = spectral_radius(h, RadiusMethod::eig);
    const double pow = spectral_radius(h, RadiusMethod::power_norm, 32);
    power_gap = std::max(power_gap, std::abs(pow - eig) / std::max(eig, 1e-300));
  }
  o.require(eig_gap <= 1e-10, "eig gap " + fmt(eig_gap));
  o.require(power_gap <= 1e-8, "power_norm gap " + fmt(power_gap));
  if (o.pass) o.detail = "max |max|lambda| - ||a||| " + fmt(eig_gap) + ", power_norm rel " + fmt(power_gap);
  return o;
}

// 3
Outcome positivity() {
  Outcome o;
  Rng rng(1003);
  int pos = 0, neg_rejected = 0, nonzero = 0;
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = 1 + k % 8;
    const Matrix a = random_matrix(n, n, rng);
    const Matrix p = a.adjoint() * a;
    pos += is_positive(p);
    if (a.norm() > 0) {
      ++nonzero;
      neg_rejected += !is_positive(-p);
    }
  }
  o.require(pos == 200, std::to_string(pos) + "/200 a*a positive");
  o.require(neg_rejected == nonzero, std::to_string(neg_rejected) + "/" + std::to_string(nonzero) + " -a*a rejected");
  if (o.pass) o.detail = "200/200 a*a positive, " + std::to_string(nonzero) + "/" + std::to_string(nonzero) + " -a*a rejected";
  return o;
}

// 4
Outcome gns() {
  Outcome o;
  Rng rng(1004);
  const std::vector<std::size_t> sizes{1, 1, 2}, mults{1, 1, 1};
  const std::vector<std::pair<std::string, FDCAlgebra>> algebras{
      {"M2", full_matrix_algebra(2)}, {"M3", full_matrix_algebra(3)}, {"C2+M2", block_diagonal_algebra(sizes, mults)}};
  double worst = 0;
  for (const auto& [name, a] : algebras) {
    const auto n = static_cast<Eigen::Index>(a.ambient_dim());
    for (int k = 0; k < 3; ++k) {
      Matrix rho = identity(a.ambient_dim()) / static_cast<double>(n);
      if (k > 0) {
        const Matrix x = random_matrix(n, n, rng);
        rho = x * x.adjoint();
        rho /= rho.trace().real();
      }
      const GNSResult g = gns_construct(state_from_density(a, rho));
      worst = std::max(worst, g.reconstruction_residual);
      o.require(g.cyclic_rank == g.hilbert_dim, name + " cyclic rank " + std::to_string(g.cyclic_rank));
      if (k == 0 && name == "M2") o.require(g.hilbert_dim == 4, "tracial M2 hilbert_dim " + std::to_string(g.hilbert_dim));
    }
  }
  o.require(worst <= 1e-10, "reconstruction " + fmt(worst));
  if (o.pass) o.detail = "9 states, max reconstruction residual " + fmt(worst) + ", tracial M2 dim 4";
  return o;
}

std::vector<FiniteGroup> structure_groups() {
  std::vector<FiniteGroup> gs;
  for (std::size_t n = 1; n <= 8; ++n) gs.push_back(FiniteGroup::cyclic(n));
  gs.push_back(FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)));
  gs.push_back(FiniteGroup::symmetric(3));
  gs.push_back(FiniteGroup::dihedral(4));
  gs.push_back(FiniteGroup::quaternion());
  return gs;
}

// 5
Outcome structure() {
  Outcome o;
  for (const FiniteGroup& g : structure_groups()) {
    const FDCAlgebra a = regular_representation(g);
    const auto blocks = block_decompose(a);
    std::size_t sq = 0;
    for (const BlockInfo& b : blocks) sq += b.block_size * b.block_size;
    const std::size_t classes = oracle::conjugacy_class_count(g.table());
    o.require(blocks.size() == classes, g.name() + " blocks " + std::to_string(blocks.size()) + " vs classes " +
                                            std::to_string(classes));
    o.require(sq == g.order(), g.name() + " sum of squares " + std::to_string(sq));
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      o.require(shape(block_decompose(a, {seed * 7919})) == shape(blocks), g.name() + " reseed " + std::to_string(seed));
  }
  o.require(sorted_sizes(decompose_group_algebra(FiniteGroup::symmetric(3))) == std::vector<std::size_t>{1, 1, 2},
            "S3 sizes");
  o.require(sorted_sizes(decompose_group_algebra(FiniteGroup::quaternion())) == std::vector<std::size_t>{1, 1, 1, 1, 2},
            "Q8 sizes");
  if (o.pass) o.detail = "12 groups match class counts, S3 {1,1,2}, Q8 {1,1,1,1,2}, stable under 5 reseedings";
  return o;
}

// 6
Outcome double_commutant_all() {
  Outcome o;
  std::vector<FDCAlgebra> algebras;
  for (const FiniteGroup& g : structure_groups()) algebras.push_back(regular_representation(g));
  algebras.push_back(full_matrix_algebra(3));
  algebras.push_back(diagonal_algebra(4));
  const std::vector<std::size_t> sizes{1, 1, 2}, mults{1, 1, 1}, sizes2{2, 1}, mults2{2, 3};
  algebras.push_back(block_diagonal_algebra(sizes, mults));
  algebras.push_back(block_diagonal_algebra(sizes2, mults2));
  double worst = 0;
  for (const FDCAlgebra& a : algebras) {
    const FDCAlgebra d = decompose(a);
    const DoubleCommutantReport r = double_commutant(d);
    worst = std::max(worst, r.containment_residual);
    o.require(r.dim_double_commutant == d.dim(),
              "dim A'' " + std::to_string(r.dim_double_commutant) + " vs " + std::to_string(d.dim()));
  }
  o.require(worst <= 1e-10, "containment " + fmt(worst));
  if (o.pass) o.detail = std::to_string(algebras.size()) + " algebras, max containment residual " + fmt(worst);
  return o;
}

// 7
Outcome stone_von_neumann() {
  Outcome o;
  double worst = 0;
  std::size_t count = 0;
  for (const FiniteGroup& g : small_group_corpus()) {
    if (g.order() > 6) continue;
    ++count;
    const auto r = stone_von_neumann_check(g);
    worst = std::max(worst, r.matrix_unit_residual);
    o.require(r.is_single_block && r.block_size == g.order(), g.name() + " block size " + std::to_string(r.block_size));
  }
  o.require(worst <= 1e-12, "matrix-unit residual " + fmt(worst));
  if (o.pass) o.detail = std::to_string(count) + " groups single block, max matrix-unit residual " + fmt(worst);
  return o;
}

// 8
Outcome conditional_expectation_check() {
  Outcome o;
  Rng rng(1008);
  double worst = 0;
  const std::vector<DynamicalSystem> systems{DynamicalSystem::trivial(scalars(), FiniteGroup::cyclic(4)),
                                             translation_system(FiniteGroup::cyclic(3))};
  for (const DynamicalSystem& sys : systems) {
    const CrossedProduct cp = build_crossed(sys);
    const DualAction beta = dual_action(cp);
    for (int k = 0; k < 50; ++k) {
      const Matrix x = random_in(cp.algebra, rng);
      worst = std::max(worst, (conditional_expectation(cp, beta, x) - identity_coefficient(cp, x)).norm());
    }
    const std::size_t rank = expectation_gram_rank(cp, beta);
    o.require(rank == cp.algebra.dim(), "gram rank " + std::to_string(rank) + "/" + std::to_string(cp.algebra.dim()));
  }
  o.require(worst <= 1e-12, "averaging vs extraction " + fmt(worst));
  if (o.pass) o.detail = "100 samples, max difference " + fmt(worst) + ", gram rank full";
  return o;
}

// 9
Outcome clock_shift_fullness() {
  Outcome o;
  int cases = 0;
  for (std::size_t q : {2, 3, 5, 7})
    for (long long p = 1; p < static_cast<long long>(q); ++p) {
      const ClockShift cs = clock_shift(q, p);
      if (!cs.coprime) continue;
      ++cases;
      const std::vector<Matrix> gens{cs.clock, cs.shift};
      const FDCAlgebra a = FDCAlgebra::generate(q, gens, true);
      const auto blocks = block_decompose(a);
      o.require(a.dim() == q * q, "q=" + std::to_string(q) + " dim " + std::to_string(a.dim()));
      o.require(blocks.size() == 1, "q=" + std::to_string(q) + " blocks " + std::to_string(blocks.size()));
    }
  if (o.pass) o.detail = std::to_string(cases) + " (q, p) pairs: dim q^2, one block";
  return o;
}

// 10
Outcome idempotents() {
  Outcome o;
  Rng rng(1010);
  double proj = 0, equiv = 0;
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = 2 + k % 6, r = 1 + k % static_cast<int>(n);
    Matrix s;
    do {
      s = random_matrix(n, n, rng);
    } while (singular_values(s).front() / singular_values(s).back() > 1e3);
    Matrix d = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < r; ++i) d(i, i) = 1.0;
    const Matrix e = s * d * s.inverse();
    const Matrix p = idempotent_to_projection(e);
    proj = std::max({proj, (p * p - p).norm(), (p - p.adjoint()).norm()});
    equiv = std::max({equiv, (e * p - p).norm(), (p * e - e).norm()});
  }
  o.require(proj <= 1e-9, "projection defect " + fmt(proj));
  o.require(equiv <= 1e-9, "equivalence defect " + fmt(equiv));
  if (o.pass) o.detail = "100 idempotents, projection defect " + fmt(proj) + ", xy/yx defect " + fmt(equiv);
  return o;
}

// 11
Outcome functoriality() {
  Outcome o;
  Rng rng(1011);
  testing::SumAlgebra c2({1, 1}), m23({2, 3}), m6({6});
  int chains = 0;
  for (int k = 0; k < 10; ++k) {
    const auto first = testing::random_block_hom(c2, m23, rng);
    const auto second = testing::random_block_hom(m23, m6, rng);
    const auto direct = testing::random_block_hom(c2, m6, rng);
    const Homomorphism phi = first.fit(), psi = second.fit(), chi = direct.fit();
    const IntMatrix kphi = k0_of_hom(phi), kpsi = k0_of_hom(psi);
    o.require(kphi == testing::in_library_order(first), "C2 -> M2+M3 matrix");
    o.require(kpsi == testing::in_library_order(second), "M2+M3 -> M6 matrix");
    o.require(k0_of_hom(chi) == testing::in_library_order(direct), "C2 -> M6 matrix");
    o.require(k0_of_hom(compose(psi, phi)) == int_multiply(kpsi, kphi), "composite");
    ++chains;
  }
  if (o.pass) o.detail = std::to_string(chains) + " composable chains, products exact";
  return o;
}

// 12
Outcome car_k0() {
  Outcome o;
  const BratteliDiagram car = BratteliDiagram::car(14);
  int checked = 0, undecided = 0, wrong = 0;
  for (std::size_t m = 1; m <= 6; ++m)
    for (std::size_t n = 1; n <= 6; ++n)
      for (long long x = -16; x <= 16; ++x)
        for (long long y = -16; y <= 16; ++y) {
          const Comparison c = bratteli_k0_equal(car, {m, ints({x})}, {n, ints({y})});
          const bool same = oracle::car_invariant(x, static_cast<int>(m)) == oracle::car_invariant(y, static_cast<int>(n));
          ++checked;
          undecided += c == Comparison::undecided_at_horizon;
          wrong += c != Comparison::undecided_at_horizon && (c == Comparison::equal) != same;
        }
  o.require(undecided == 0, std::to_string(undecided) + " undecided");
  o.require(wrong == 0, std::to_string(wrong) + " disagreements");
  if (o.pass) o.detail = std::to_string(checked) + " comparisons agree with k/2^(level-1)";
  return o;
}

/// v in M_k(M_2 (+) M_3): unitary on the quotient summand, a random-rank
/// partial isometry on the ideal summand.
Matrix random_partial_isometry(std::size_t k, bool ideal_is_big, Rng& rng) {
  const auto kk = static_cast<Eigen::Index>(k);
  auto piece = [&](Eigen::Index n, bool ideal) {
    const Eigen::Index size = n * kk;
    if (!ideal) return random_unitary(size, rng);
    Matrix d = Matrix::Zero(size, size);
    const Eigen::Index r = std::uniform_int_distribution<Eigen::Index>(0, size)(rng);
    for (Eigen::Index i = 0; i < r; ++i) d(i, i) = 1.0;
    return Matrix(random_unitary(size, rng) * d * random_unitary(size, rng).adjoint());
  };
  const Matrix small = piece(2, !ideal_is_big), big = piece(3, ideal_is_big);
  Matrix v = Matrix::Zero(5 * kk, 5 * kk);
  for (Eigen::Index i = 0; i < kk; ++i)
    for (Eigen::Index j = 0; j < kk; ++j) {
      v.block(i * 5, j * 5, 2, 2) = small.block(i * 2, j * 2, 2, 2);
      v.block(i * 5 + 2, j * 5 + 2, 3, 3) = big.block(i * 3, j * 3, 3, 3);
    }
  return v;
}

// 13
Outcome index_map_check() {
  Outcome o;
  const K0Class formal = index_map({0, ints({0})}, {0, ints({1})});
  o.require(formal.vector == ints({-1}), "formal Toeplitz data");
  testing::SumAlgebra m23({2, 3});
  const auto blocks = blocks_of(m23.algebra);
  Rng rng(1013);
  int zero = 0;
  for (int t = 0; t < 50; ++t) {
    const bool big_ideal = t % 2 == 0;
    std::vector<std::size_t> ideal;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if ((blocks[b].block_size == 3) == big_ideal) ideal.push_back(b);
    const Matrix v = random_partial_isometry(1 + static_cast<std::size_t>(t % 2), big_ideal, rng);
    const K0Class c = index_map_matrix(v, m23.algebra, ideal);
    zero += (c.vector.array() == 0).all();
  }
  o.require(zero == 50, std::to_string(zero) + "/50 zero");
  if (o.pass) o.detail = "formal data gives -[p]; 50/50 partial isometries give 0";
  return o;
}

// 14
Outcome imprimitivity() {
  Outcome o;
  double worst = 0;
  int instances = 0;
  std::string s3a3;
  for (const FiniteGroup& g : small_group_corpus())
    for (const auto& h : g.subgroups()) {
      ++instances;
      const auto bm = build_bimodule(g, h);
      const AxiomReport r = verify_axioms(bm);
      const BlockCorrespondence bc = block_correspondence(bm);
      const std::string tag = g.name() + " H=" + std::to_string(h.size());
      worst = std::max(worst, r.worst());
      o.require(bm.gram_min_eigenvalue_left >= -1e-10 && bm.gram_min_eigenvalue_right >= -1e-10, tag + " gram");
      o.require(r.full_left && r.full_right, tag + " fullness");
      const std::size_t irreps = oracle::conjugacy_class_count(g.subgroup(h).table());
      o.require(bc.matched && bc.blocks_left.size() == irreps && bc.blocks_right.size() == irreps, tag + " blocks");
      if (g == FiniteGroup::symmetric(3) && h.size() == 3)
        s3a3 = std::to_string(bc.blocks_left.size()) + " = " + std::to_string(bc.blocks_right.size());
    }
  o.require(worst <= 1e-10, "axiom residual " + fmt(worst));
  o.require(s3a3 == "3 = 3", "(S3, A3) reports " + s3a3);
  if (o.pass)
    o.detail = std::to_string(instances) + " (G, H) pairs, max axiom residual " + fmt(worst) + ", (S3, A3) " + s3a3;
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 15
Outcome determinism(const std::string& dir) {
  Outcome o;
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
      {{"--format", "json", "decompose", dir + "/s3_table.json"}, "decompose_s3.json"},
      {{"--format", "json", "svn", dir + "/z3_table.json"}, "svn_z3.json"},
      {{"--format", "json", "bratteli", dir + "/car.json", "--x", "1:2", "--y", "3:8"}, "bratteli_car.json"},
  };
  for (const auto& [args, file] : cases) {
    const std::string want = slurp(dir + "/" + file);
    o.require(!want.empty(), file + " missing");
    for (int rep = 0; rep < 3; ++rep) {
      const auto r = cli::run(args);
      o.require(r.exit_code == 0 && r.out == want, file + " run " + std::to_string(rep));
    }
  }
  if (o.pass) o.detail = "3 golden reports identical over 3 runs each";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : OPALG_GOLDEN_DIR;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"C*-identity", c_star_identity},
      {"spectral radius", spectral_radius_check},
      {"positivity of a*a", positivity},
      {"GNS reconstruction", gns},
      {"structure theorem", structure},
      {"double commutant", double_commutant_all},
      {"Stone-von Neumann", stone_von_neumann},
      {"conditional expectation", conditional_expectation_check},
      {"clock/shift fullness", clock_shift_fullness},
      {"idempotent to projection", idempotents},
      {"K0 functoriality", functoriality},
      {"CAR K0", car_k0},
      {"index map", index_map_check},
      {"imprimitivity", imprimitivity},
      {"CLI determinism", [&] { return determinism(dir); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    failed += !o.pass;
    std::printf("%s %2zu %-26s %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), took.count());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
