#include "opalg/groups.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include <Eigen/Eigenvalues>

#include "opalg/random.hpp"

namespace opalg {

namespace {

[[noreturn]] void invalid(const std::string& detail) { throw Error("FiniteGroup", "InvalidGroup", detail); }

}  // namespace

FiniteGroup::FiniteGroup(std::vector<std::vector<std::size_t>> table, std::string name)
    : table_(std::move(table)), name_(std::move(name)) {
  const std::size_t n = table_.size();
  if (n == 0) invalid("empty table");
  for (const auto& row : table_) {
    if (row.size() != n) invalid("table is not square");
    for (std::size_t v : row)
      if (v >= n) invalid("entry out of range");
  }
  for (std::size_t t = 0; t < n; ++t)
    if (table_[0][t] != t || table_[t][0] != t) invalid("index 0 is not a two-sided identity");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) invalid("not associative");
  inverse_.assign(n, n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t)
      if (table_[s][t] == 0 && table_[t][s] == 0) {
        inverse_[s] = t;
        break;
      }
    if (inverse_[s] == n) invalid("element " + std::to_string(s) + " has no inverse");
  }
}

bool FiniteGroup::is_abelian() const {
  for (std::size_t s = 0; s < order(); ++s)
    for (std::size_t t = s + 1; t < order(); ++t)
      if (mul(s, t) != mul(t, s)) return false;
  return true;
}

std::vector<std::vector<std::size_t>> FiniteGroup::conjugacy_classes() const {
  std::vector<bool> seen(order(), false);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t s = 0; s < order(); ++s) {
    if (seen[s]) continue;
    std::set<std::size_t> cls;
    for (std::size_t t = 0; t < order(); ++t) cls.insert(mul(mul(t, s), inv(t)));
    for (std::size_t c : cls) seen[c] = true;
    classes.emplace_back(cls.begin(), cls.end());
  }
  return classes;
}

bool FiniteGroup::is_subgroup(const std::vector<std::size_t>& elements) const {
  std::set<std::size_t> set(elements.begin(), elements.end());
  if (set.empty() || !set.count(0)) return false;
  for (std::size_t s : set) {
    if (s >= order() || !set.count(inv(s))) return false;
    for (std::size_t t : set)
      if (!set.count(mul(s, t))) return false;
  }
  return true;
}

FiniteGroup FiniteGroup::subgroup(const std::vector<std::size_t>& elements) const {
  if (!is_subgroup(elements)) throw Error("subgroup", "NotASubgroup", "");
  std::vector<std::size_t> sorted(elements.begin(), elements.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> position(order(), 0);
  for (std::size_t k = 0; k < sorted.size(); ++k) position[sorted[k]] = k;
  std::vector<std::vector<std::size_t>> t(sorted.size(), std::vector<std::size_t>(sorted.size()));
  for (std::size_t a = 0; a < sorted.size(); ++a)
    for (std::size_t b = 0; b < sorted.size(); ++b) t[a][b] = position[mul(sorted[a], sorted[b])];
  return FiniteGroup(std::move(t), name_.empty() ? "" : "subgroup of " + name_);
}

std::vector<std::vector<std::size_t>> FiniteGroup::subgroups() const {
  auto closure = [&](std::set<std::size_t> s) {
    bool grew = true;
    while (grew) {
      grew = false;
      const std::vector<std::size_t> cur(s.begin(), s.end());
      for (std::size_t a : cur)
        for (std::size_t b : cur)
          if (s.insert(mul(a, b)).second) grew = true;
    }
    return s;
  };
  std::set<std::vector<std::size_t>> found{{0}};
  std::vector<std::vector<std::size_t>> frontier{{0}};
  while (!frontier.empty()) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& h : frontier) {
      for (std::size_t g = 0; g < order(); ++g) {
        if (std::binary_search(h.begin(), h.end(), g)) continue;
        std::set<std::size_t> s(h.begin(), h.end());
        s.insert(g);
        const std::set<std::size_t> c = closure(std::move(s));
        std::vector<std::size_t> v(c.begin(), c.end());
        if (found.insert(v).second) next.push_back(std::move(v));
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::vector<std::size_t>> out(found.begin(), found.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
  return out;
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
  if (n == 0) invalid("cyclic group of order 0");
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return FiniteGroup(std::move(t), "Z/" + std::to_string(n));
}

FiniteGroup FiniteGroup::product(const FiniteGroup& g, const FiniteGroup& h) {
  const std::size_t m = h.order(), n = g.order() * m;
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = g.mul(a / m, b / m) * m + h.mul(a % m, b % m);
  return FiniteGroup(std::move(t), g.name() + "x" + h.name());
}

FiniteGroup FiniteGroup::symmetric(std::size_t n) {
  if (n == 0 || n > 5) invalid("symmetric group supported for 1 <= n <= 5");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  const std::size_t order = perms.size();
  std::vector<std::vector<std::size_t>> t(order, std::vector<std::size_t>(order));
  for (std::size_t a = 0; a < order; ++a)
    for (std::size_t b = 0; b < order; ++b) {
      std::vector<int> c(n);
      for (std::size_t i = 0; i < n; ++i) c[i] = perms[a][static_cast<std::size_t>(perms[b][i])];
      t[a][b] = static_cast<std::size_t>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return FiniteGroup(std::move(t), "S" + std::to_string(n));
}

FiniteGroup FiniteGroup::dihedral(std::size_t n) {
  if (n == 0) invalid("dihedral group needs n >= 1");
  // r^k s^f -> k + n f, with s r s = r^{-1}
  const std::size_t order = 2 * n;
  std::vector<std::vector<std::size_t>> t(order, std::vector<std::size_t>(order));
  for (std::size_t x = 0; x < order; ++x)
    for (std::size_t y = 0; y < order; ++y) {
      const std::size_t a = x % n, f = x / n, b = y % n, g = y / n;
      const std::size_t k = f == 0 ? (a + b) % n : (a + n - b) % n;
      t[x][y] = k + n * ((f + g) % 2);
    }
  return FiniteGroup(std::move(t), "D" + std::to_string(n));
}

FiniteGroup FiniteGroup::quaternion() {
  // index = 2*unit + (sign < 0), units 1, i, j, k
  static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  std::vector<std::vector<std::size_t>> t(8, std::vector<std::size_t>(8));
  for (std::size_t x = 0; x < 8; ++x)
    for (std::size_t y = 0; y < 8; ++y) {
      const int ux = static_cast<int>(x / 2), uy = static_cast<int>(y / 2);
      int s = sign[ux][uy];
      if (x % 2) s = -s;
      if (y % 2) s = -s;
      t[x][y] = static_cast<std::size_t>(2 * unit[ux][uy] + (s < 0 ? 1 : 0));
    }
  return FiniteGroup(std::move(t), "Q8");
}

std::vector<FiniteGroup> small_group_corpus() {
  std::vector<FiniteGroup> out;
  for (std::size_t n = 1; n <= 8; ++n) out.push_back(FiniteGroup::cyclic(n));
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  out.push_back(FiniteGroup::product(z2, z2));
  out.push_back(FiniteGroup::product(z2, FiniteGroup::cyclic(4)));
  out.push_back(FiniteGroup::product(FiniteGroup::product(z2, z2), z2));
  out.push_back(FiniteGroup::symmetric(3));
  out.push_back(FiniteGroup::dihedral(4));
  out.push_back(FiniteGroup::quaternion());
  return out;
}

GroupAlgebraElement GroupAlgebraElement::zero(std::shared_ptr<const FiniteGroup> g) {
  const auto n = static_cast<Eigen::Index>(g->order());
  return {std::move(g), Vector::Zero(n)};
}

GroupAlgebraElement GroupAlgebraElement::delta(std::shared_ptr<const FiniteGroup> g, std::size_t s) {
  GroupAlgebraElement f = zero(std::move(g));
  f.coeffs(static_cast<Eigen::Index>(s)) = 1.0;
  return f;
}

GroupAlgebraElement convolve(const GroupAlgebraElement& f, const GroupAlgebraElement& g) {
  if (f.group != g.group && !(*f.group == *g.group)) throw Error("convolve", "GroupMismatch", "");
  const FiniteGroup& grp = *f.group;
  const std::size_t n = grp.order();
  GroupAlgebraElement out = GroupAlgebraElement::zero(f.group);
  for (std::size_t s = 0; s < n; ++s) {
    Complex acc(0.0);
    for (std::size_t t = 0; t < n; ++t)
      acc += f.coeffs(static_cast<Eigen::Index>(grp.mul(s, t))) * g.coeffs(static_cast<Eigen::Index>(grp.inv(t)));
    out.coeffs(static_cast<Eigen::Index>(s)) = acc;
  }
  return out;
}

GroupAlgebraElement star(const GroupAlgebraElement& f) {
  GroupAlgebraElement out = GroupAlgebraElement::zero(f.group);
  for (std::size_t s = 0; s < f.group->order(); ++s)
    out.coeffs(static_cast<Eigen::Index>(s)) = std::conj(f.coeffs(static_cast<Eigen::Index>(f.group->inv(s))));
  return out;
}

std::vector<Matrix> left_regular_matrices(const FiniteGroup& g) {
  const auto n = static_cast<Eigen::Index>(g.order());
  std::vector<Matrix> out;
  out.reserve(g.order());
  for (std::size_t s = 0; s < g.order(); ++s) {
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t t = 0; t < g.order(); ++t) m(static_cast<Eigen::Index>(g.mul(s, t)), static_cast<Eigen::Index>(t)) = 1.0;
    out.push_back(std::move(m));
  }
  return out;
}

Matrix left_regular_image(const FiniteGroup& g, const Vector& coeffs) {
  const auto n = static_cast<Eigen::Index>(g.order());
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t t = 0; t < g.order(); ++t)
      m(static_cast<Eigen::Index>(g.mul(s, t)), static_cast<Eigen::Index>(t)) += coeffs(static_cast<Eigen::Index>(s));
  return m;
}

FDCAlgebra regular_representation(const FiniteGroup& g, const Tolerance& tol) {
  const std::vector<Matrix> lambda = left_regular_matrices(g);
  return FDCAlgebra::generate(g.order(), lambda, /*unital=*/true, tol);
}

std::vector<BlockInfo> decompose_group_algebra(const FiniteGroup& g, const DecomposeOptions& opts, const Tolerance& tol) {
  std::vector<BlockInfo> blocks = block_decompose(regular_representation(g, tol), opts, tol);
  const std::size_t classes = g.conjugacy_classes().size();
  std::size_t squares = 0;
  for (const BlockInfo& b : blocks) squares += b.block_size * b.block_size;
  if (blocks.size() != classes || squares != g.order())
    throw Error("decompose_group_algebra", "ClassCountMismatch",
                std::to_string(blocks.size()) + " blocks vs " + std::to_string(classes) + " classes");
  return blocks;
}

namespace {

double unit_arg(Complex z) {
  double a = std::arg(z);
  if (a < 0) a += 2.0 * std::numbers::pi;
  if (a > 2.0 * std::numbers::pi - 1e-9) a = 0.0;
  return std::round(a * 1e9) / 1e9;
}

bool character_less(const Character& x, const Character& y) {
  for (Eigen::Index s = 0; s < x.values.size(); ++s) {
    const double a = unit_arg(x.values(s)), b = unit_arg(y.values(s));
    if (a != b) return a < b;
  }
  return false;
}

}  // namespace

std::vector<Character> dual_group(const FiniteGroup& g, std::uint64_t seed, const Tolerance& tol) {
  const char* op = "dual_group";
  if (!g.is_abelian()) throw Error(op, "NonAbelian", g.name());
  const std::size_t n = g.order();
  const auto ni = static_cast<Eigen::Index>(n);
  const std::vector<Matrix> lambda = left_regular_matrices(g);
  Rng rng(seed);
  for (int attempt = 0; attempt <= 8; ++attempt) {
    Matrix x = Matrix::Zero(ni, ni);
    for (std::size_t s = 0; s < n; ++s) {
      const Matrix& l = lambda[s];
      x += random_real(rng) * (l + l.adjoint()) + Complex(0.0, random_real(rng)) * (l - l.adjoint());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(x);
    const double radius = tol.effective(x);
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 1; i < ni; ++i) gap = std::min(gap, es.eigenvalues()(i) - es.eigenvalues()(i - 1));
    if (gap < std::max(1e3 * radius, 1e-6)) continue;

    std::vector<Character> chars;
    for (Eigen::Index k = 0; k < ni; ++k) {
      const Vector v = es.eigenvectors().col(k);
      Character c{Vector(ni)};
      for (std::size_t s = 0; s < n; ++s) c.values(static_cast<Eigen::Index>(s)) = v.dot(lambda[s] * v);
      chars.push_back(std::move(c));
    }
    const double eps = tol.effective(1.0, n);
    for (const Character& c : chars)
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t) {
          const auto st = static_cast<Eigen::Index>(g.mul(s, t));
          if (std::abs(c.values(st) - c.values(static_cast<Eigen::Index>(s)) * c.values(static_cast<Eigen::Index>(t))) > eps)
            throw Error(op, "NotMultiplicative", "joint eigenvector is not a character");
        }
    // closed under pointwise product
    for (const Character& a : chars)
      for (const Character& b : chars) {
        const Vector prod = a.values.cwiseProduct(b.values);
        const bool present = std::any_of(chars.begin(), chars.end(),
                                         [&](const Character& c) { return (c.values - prod).norm() <= eps; });
        if (!present) throw Error(op, "NotClosed", "pointwise product of characters missing");
      }
    std::sort(chars.begin(), chars.end(), character_less);
    return chars;
  }
  throw Error(op, "RetryBudgetExhausted", "");
}

Vector fourier_transform(const std::vector<Character>& dual, const Vector& f) {
  Vector out(static_cast<Eigen::Index>(dual.size()));
  for (std::size_t k = 0; k < dual.size(); ++k)
    out(static_cast<Eigen::Index>(k)) = (dual[k].values.array() * f.array()).sum();
  return out;
}

FourierReport fourier_iso_check(const FiniteGroup& g, std::size_t random_pairs, std::uint64_t seed, const Tolerance& tol) {
  if (!g.is_abelian()) throw Error("fourier_iso_check", "NonAbelian", g.name());
  const auto grp = std::make_shared<const FiniteGroup>(g);
  const std::vector<Character> dual = dual_group(g, seed, tol);
  const std::size_t n = g.order();
  FourierReport rep;

  auto check_pair = [&](const GroupAlgebraElement& f, const GroupAlgebraElement& h) {
    const Vector lhs = fourier_transform(dual, convolve(f, h).coeffs);
    const Vector rhs = fourier_transform(dual, f.coeffs).cwiseProduct(fourier_transform(dual, h.coeffs));
    rep.multiplicativity = std::max(rep.multiplicativity, (lhs - rhs).cwiseAbs().maxCoeff());
    const Vector st = fourier_transform(dual, star(f).coeffs);
    rep.star = std::max(rep.star, (st - fourier_transform(dual, f.coeffs).conjugate()).cwiseAbs().maxCoeff());
  };
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      check_pair(GroupAlgebraElement::delta(grp, s), GroupAlgebraElement::delta(grp, t));
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t k = 0; k < random_pairs; ++k) {
    GroupAlgebraElement f{grp, random_matrix(static_cast<Eigen::Index>(n), 1, rng)};
    GroupAlgebraElement h{grp, random_matrix(static_cast<Eigen::Index>(n), 1, rng)};
    check_pair(f, h);
  }

  Matrix table(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) table.row(static_cast<Eigen::Index>(k)) = dual[k].values.transpose();
  rep.bijectivity = (table.adjoint() * table / static_cast<double>(n) - identity(n)).cwiseAbs().maxCoeff();
  rep.max_residual = std::max({rep.multiplicativity, rep.star, rep.bijectivity});
  return rep;
}

}  // namespace opalg
