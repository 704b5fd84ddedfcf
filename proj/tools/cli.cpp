#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "CLI11.hpp"

#include "opalg/io.hpp"

namespace opalg::cli {

namespace {

using io::Json;

struct Options {
  std::string format = "text";
  double tol = Tolerance{}.base_eps;
  std::uint64_t seed = kDefaultSeed;
  std::size_t horizon = kDefaultHorizon;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string num(Complex z) {
  if (std::abs(z.imag()) < 1e-12) return num(z.real() == 0.0 ? 0.0 : z.real());
  return num(z.real()) + (z.imag() < 0 ? "-" : "+") + num(std::abs(z.imag())) + "i";
}

std::string vec(const IntVector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v(i));
  return s + ")";
}

std::string matrix_text(const Matrix& m) {
  std::string s;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    s += "  [";
    for (Eigen::Index c = 0; c < m.cols(); ++c) s += (c ? ", " : "") + num(m(r, c));
    s += "]\n";
  }
  return s;
}

std::string blocks_text(const std::vector<BlockInfo>& blocks) {
  std::string s = "blocks:";
  for (const BlockInfo& b : blocks) s += " " + std::to_string(b.block_size);
  s += "\n";
  for (std::size_t i = 0; i < blocks.size(); ++i)
    s += "  block " + std::to_string(i) + ": M_" + std::to_string(blocks[i].block_size) + " with multiplicity " +
         std::to_string(blocks[i].multiplicity) + "\n";
  return s;
}

bool is_group_input(const Json& j) { return j.is_object() && (j.contains("table") || j.contains("builtin")); }

/// A command produces a JSON report and its text rendering.
struct Report {
  Json json;
  std::string text;
};

Json header(const std::string& command, const Options& o) {
  return Json{{"command", command}, {"tolerance", o.tol}, {"seed", o.seed}};
}

Report spectrum_cmd(const std::string& path, const Options& o) {
  const Tolerance tol{o.tol};
  const Matrix a = io::matrix_from_json(io::read_file(path));
  const SpectrumResult s = spectrum(a, tol);
  const Classification c = classify(a, tol);
  Report r{header("spectrum", o), ""};
  r.json["spectrum"] = io::to_json(s);
  r.json["classification"] = Json{{"selfadjoint", c.selfadjoint}, {"normal", c.normal},       {"unitary", c.unitary},
                                  {"projection", c.projection},   {"isometry", c.isometry}, {"partial_isometry", c.partial_isometry}};
  r.text = "eigenvalues: [";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) r.text += (i ? ", " : "") + num(s.eigenvalues[i]);
  r.text += "]\nnormal: " + std::string(c.normal ? "yes" : "no") + ", self-adjoint: " + (c.selfadjoint ? "yes" : "no") + "\n";
  return r;
}

Report funcalc_cmd(const std::string& path, const std::string& fn, double t, const Options& o) {
  const Tolerance tol{o.tol};
  const Matrix a = io::matrix_from_json(io::read_file(path));
  const Matrix fa = func_calc(a, ScalarFunction::by_name(fn, t), tol);
  Report r{header("funcalc", o), ""};
  r.json["function"] = fn;
  r.json["result"] = io::to_json(fa);
  r.text = fn + "(a) =\n" + matrix_text(fa);
  return r;
}

Report decompose_cmd(const std::string& path, const Options& o) {
  const Tolerance tol{o.tol};
  const DecomposeOptions opts{o.seed};
  const Json in = io::read_file(path);
  Report r{header("decompose", o), ""};
  std::vector<BlockInfo> blocks;
  if (is_group_input(in)) {
    const FiniteGroup g = io::group_from_json(in);
    blocks = decompose_group_algebra(g, opts, tol);
    r.json["input"] = "group";
    r.json["group_order"] = g.order();
  } else {
    const FDCAlgebra a = io::algebra_from_json(in, tol);
    blocks = block_decompose(a, opts, tol);
    r.json["input"] = "algebra";
    r.json["dim"] = a.dim();
    r.json["ambient_dim"] = a.ambient_dim();
  }
  r.json["blocks"] = io::to_json(blocks);
  r.text = blocks_text(blocks);
  return r;
}

Report gns_cmd(const std::string& alg_path, const std::string& state_path, const Options& o) {
  const Tolerance tol{o.tol};
  const FDCAlgebra a = io::algebra_from_json(io::read_file(alg_path), tol);
  const State phi = io::state_from_json(a, io::read_file(state_path), tol);
  const GNSResult g = gns_construct(phi, tol);
  const bool irreducible = is_irreducible(g.rep, tol);
  Report r{header("gns", o), ""};
  r.json["gns"] = io::to_json(g);
  r.json["irreducible"] = irreducible;
  r.text = "hilbert_dim: " + std::to_string(g.hilbert_dim) + "\ncyclic_rank: " + std::to_string(g.cyclic_rank) +
           "\nreconstruction_residual: " + num(g.reconstruction_residual) +
           "\nirreducible: " + (irreducible ? "yes" : "no") + "\n";
  return r;
}

Report groupalg_cmd(const std::string& path, const Options& o) {
  const Tolerance tol{o.tol};
  const FiniteGroup g = io::group_from_json(io::read_file(path));
  const std::vector<BlockInfo> blocks = decompose_group_algebra(g, {o.seed}, tol);
  const std::size_t classes = g.conjugacy_classes().size();
  std::size_t squares = 0;
  for (const BlockInfo& b : blocks) squares += b.block_size * b.block_size;
  Report r{header("groupalg", o), ""};
  r.json["group_order"] = g.order();
  r.json["abelian"] = g.is_abelian();
  r.json["conjugacy_classes"] = classes;
  r.json["blocks"] = io::to_json(blocks);
  r.json["sum_of_squares"] = squares;
  r.text = blocks_text(blocks) + "conjugacy classes: " + std::to_string(classes) + ", sum n_i^2 = " +
           std::to_string(squares) + " = |G|\n";
  return r;
}

Report dual_cmd(const std::string& path, const Options& o) {
  const Tolerance tol{o.tol};
  const FiniteGroup g = io::group_from_json(io::read_file(path));
  const std::vector<Character> dual = dual_group(g, o.seed, tol);
  const FourierReport f = fourier_iso_check(g, 16, o.seed, tol);
  Report r{header("dual", o), ""};
  r.json["characters"] = io::to_json(dual);
  r.json["fourier_residual"] = f.max_residual;
  r.text = "character table (" + std::to_string(dual.size()) + " characters):\n";
  for (const Character& c : dual) {
    r.text += "  [";
    for (Eigen::Index s = 0; s < c.values.size(); ++s) r.text += (s ? ", " : "") + num(c.values(s));
    r.text += "]\n";
  }
  r.text += "fourier residual: " + num(f.max_residual) + "\n";
  return r;
}

Report crossed_cmd(const std::string& path, const Options& o) {
  const Tolerance tol{o.tol};
  const DynamicalSystem sys = io::system_from_json(io::read_file(path), tol);
  const CrossedProduct cp = build_crossed(sys, tol);
  const std::vector<BlockInfo> blocks = block_decompose(cp.algebra, {o.seed}, tol);
  Report r{header("crossed", o), ""};
  r.json["algebra_dim"] = sys.algebra.dim();
  r.json["group_order"] = sys.group->order();
  r.json["crossed_dim"] = cp.algebra.dim();
  r.json["ambient_dim"] = cp.algebra.ambient_dim();
  r.json["relation_residual"] = cp.relations.worst();
  r.json["blocks"] = io::to_json(blocks);
  r.text = "crossed product of dimension " + std::to_string(cp.algebra.dim()) + " = " +
           std::to_string(sys.group->order()) + " x " + std::to_string(sys.algebra.dim()) + " inside M_" +
           std::to_string(cp.algebra.ambient_dim()) + "\nrelation residual: " + num(cp.relations.worst()) + "\n" +
           blocks_text(blocks);
  return r;
}

Report svn_cmd(const std::string& path, const Options& o) {
  const Tolerance tol{o.tol};
  const FiniteGroup g = io::group_from_json(io::read_file(path));
  const StoneVonNeumannReport rep = stone_von_neumann_check(g, {o.seed}, tol);
  Report r{header("svn", o), ""};
  r.json["report"] = io::to_json(rep);
  if (rep.is_single_block) {
    r.text = "single block of size " + std::to_string(rep.block_size) + ", residual " +
             (rep.matrix_unit_residual <= 1e-12 ? std::string("<= 1e-12") : num(rep.matrix_unit_residual)) + "\n";
  } else {
    r.text = "not a single full block (first block size " + std::to_string(rep.block_size) + ")\n";
  }
  return r;
}

Report k0_class_cmd(const std::string& alg_path, const std::string& proj_path, const Options& o) {
  const Tolerance tol{o.tol};
  const FDCAlgebra a = io::algebra_from_json(io::read_file(alg_path), tol);
  const Matrix p = io::matrix_from_json(io::read_file(proj_path));
  const K0Class c = k0_class(p, decompose(a, {o.seed}, tol), tol);
  Report r{header("k0 class", o), ""};
  r.json["class"] = io::to_json(c);
  r.text = "[p] = " + vec(c.vector) + "\n";
  return r;
}

Report k0_hom_cmd(const std::string& path, const Options& o) {
  const Tolerance tol{o.tol};
  const Json in = io::read_file(path);
  const char* what = "homomorphism";
  if (!in.contains("domain") || !in.contains("codomain") || !in.contains("sources") || !in.contains("targets"))
    io::parse_error(what, "need domain, codomain, sources and targets");
  const FDCAlgebra dom = decompose(io::algebra_from_json(in.at("domain"), tol), {o.seed}, tol);
  const FDCAlgebra cod = decompose(io::algebra_from_json(in.at("codomain"), tol), {o.seed}, tol);
  std::vector<Matrix> sources, targets;
  for (const Json& m : in.at("sources")) sources.push_back(io::matrix_from_json(m));
  for (const Json& m : in.at("targets")) targets.push_back(io::matrix_from_json(m));
  const Homomorphism phi = Homomorphism::fit(dom, cod, sources, targets, in.value("unital", true), tol);
  const IntMatrix m = k0_of_hom(phi, o.seed, tol);
  Report r{header("k0 hom", o), ""};
  r.json["matrix"] = io::to_json(m);
  r.text = "K0 matrix:\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) r.text += "  " + vec(m.row(i).transpose()) + "\n";
  return r;
}

Report bratteli_cmd(const std::string& path, const std::string& x, const std::string& y, const std::string& command,
                    const Options& o) {
  const BratteliDiagram d = io::bratteli_from_json(io::read_file(path));
  Report r{header(command, o), ""};
  r.json["depth"] = d.depth();
  r.json["unital"] = d.unital;
  r.json["horizon"] = o.horizon;
  r.text = "diagram with " + std::to_string(d.depth()) + " levels\n";
  if (!x.empty() && !y.empty()) {
    const K0Class cx = io::k0_from_string(x), cy = io::k0_from_string(y);
    const Comparison c = bratteli_k0_equal(d, cx, cy, o.horizon);
    r.json["x"] = io::to_json(cx);
    r.json["y"] = io::to_json(cy);
    r.json["comparison"] = to_string(c);
    r.text += "x = " + vec(cx.vector) + " at level " + std::to_string(cx.level) + ", y = " + vec(cy.vector) +
              " at level " + std::to_string(cy.level) + ": " + to_string(c) + "\n";
  }
  if (!x.empty()) {
    const K0Class cx = io::k0_from_string(x);
    const Positivity p = bratteli_k0_positive(d, cx, o.horizon);
    r.json["x"] = io::to_json(cx);
    r.json["positivity"] = to_string(p);
    r.text += "x is " + std::string(to_string(p)) + "\n";
  }
  return r;
}

Report k0_index_cmd(const std::string& ker, const std::string& coker, const std::string& alg_path,
                    const std::string& v_path, const std::vector<std::size_t>& ideal, const Options& o) {
  const Tolerance tol{o.tol};
  Report r{header("k0 index", o), ""};
  K0Class c;
  if (!alg_path.empty()) {
    const FDCAlgebra a = decompose(io::algebra_from_json(io::read_file(alg_path), tol), {o.seed}, tol);
    c = index_map_matrix(io::matrix_from_json(io::read_file(v_path)), a, ideal, tol);
  } else {
    if (ker.empty() || coker.empty()) io::parse_error("k0 index", "need --ker and --coker, or an algebra and a matrix");
    c = index_map(io::k0_from_string(ker), io::k0_from_string(coker));
  }
  r.json["index"] = io::to_json(c);
  r.text = "index = " + vec(c.vector) + "\n";
  return r;
}

Report morita_cmd(const std::string& path, const std::vector<std::size_t>& subgroup, std::size_t samples,
                  const Options& o) {
  const Tolerance tol{o.tol};
  const FiniteGroup g = io::group_from_json(io::read_file(path));
  const ImprimitivityBimodule bm = build_bimodule(g, subgroup, tol);
  const AxiomReport ax = verify_axioms(bm, samples, o.seed, tol);
  const BlockCorrespondence bc = block_correspondence(bm, {o.seed}, tol);
  Report r{header("morita", o), ""};
  r.json["module_dim"] = bm.module_dim();
  r.json["left_dim"] = bm.left.algebra.dim();
  r.json["right_dim"] = bm.right.dim();
  r.json["axioms"] = io::to_json(ax);
  r.json["blocks"] = io::to_json(bc);
  r.text = "module dim " + std::to_string(bm.module_dim()) + ", left algebra dim " +
           std::to_string(bm.left.algebra.dim()) + ", right algebra dim " + std::to_string(bm.right.dim()) +
           "\nworst axiom residual: " + num(ax.worst()) + "\nfull: " + (ax.full_left && ax.full_right ? "yes" : "no") +
           "\nblocks: " + std::to_string(bc.blocks_left.size()) + " = " + std::to_string(bc.blocks_right.size()) +
           (bc.matched ? " (matched)" : " (not matched)") + "\n";
  return r;
}

}  // namespace

Result run(const std::vector<std::string>& args) {
  Options o;
  if (const char* env = std::getenv("OPALG_SEED")) {
    try {
      o.seed = std::stoull(env);
    } catch (const std::exception&) {
      return {2, "", "error: OPALG_SEED is not an unsigned integer\n"};
    }
  }

  CLI::App app{"Finite-dimensional operator algebra toolkit", "opalg"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--tol", o.tol, "Base tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Seed for generic elements");
  app.add_option("--horizon", o.horizon, "Bratteli search horizon")->check(CLI::PositiveNumber);

  std::function<Report()> action;
  std::string file, file2, fn = "identity", x, y, ker, coker;
  double t = 1.0;
  std::vector<std::size_t> subgroup, ideal;
  std::size_t samples = 16;

  auto one_file = [&](const std::string& name, const std::string& help, std::function<Report()> f) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("input", file, "Input JSON file")->required()->check(CLI::ExistingFile);
    sub->callback([&action, f] { action = f; });
    return sub;
  };

  one_file("spectrum", "Spectrum of a matrix", [&] { return spectrum_cmd(file, o); });
  auto* funcalc = one_file("funcalc", "Functional calculus f(a)", [&] { return funcalc_cmd(file, fn, t, o); });
  funcalc->add_option("--fn", fn, "identity|sqrt|exp|exp_it|log|abs|conj")->required();
  funcalc->add_option("--t", t, "Parameter for exp_it");
  one_file("decompose", "Block decomposition of an algebra or a group algebra", [&] { return decompose_cmd(file, o); });
  auto* gns = one_file("gns", "GNS construction", [&] { return gns_cmd(file, file2, o); });
  gns->add_option("state", file2, "State JSON file")->required()->check(CLI::ExistingFile);
  one_file("groupalg", "Group algebra decomposition", [&] { return groupalg_cmd(file, o); });
  one_file("dual", "Character table of an abelian group", [&] { return dual_cmd(file, o); });
  one_file("crossed", "Crossed product of a dynamical system", [&] { return crossed_cmd(file, o); });
  one_file("svn", "Stone-von Neumann check", [&] { return svn_cmd(file, o); });
  auto* bratteli = one_file("bratteli", "Bratteli diagram queries",
                            [&] { return bratteli_cmd(file, x, y, "bratteli", o); });
  bratteli->add_option("--x", x, "Class LEVEL:v1,v2,...");
  bratteli->add_option("--y", y, "Class LEVEL:v1,v2,...");
  auto* morita = one_file("morita", "Imprimitivity bimodule report", [&] { return morita_cmd(file, subgroup, samples, o); });
  morita->add_option("--subgroup", subgroup, "Subgroup element indices")->required()->delimiter(',');
  morita->add_option("--samples", samples, "Random samples per axiom");

  CLI::App* k0 = app.add_subcommand("k0", "K-theory");
  k0->require_subcommand(1);
  CLI::App* k0_class = k0->add_subcommand("class", "Dimension vector of a projection");
  k0_class->add_option("algebra", file, "Algebra JSON")->required()->check(CLI::ExistingFile);
  k0_class->add_option("projection", file2, "Projection JSON")->required()->check(CLI::ExistingFile);
  k0_class->callback([&] { action = [&] { return k0_class_cmd(file, file2, o); }; });
  CLI::App* k0_hom = k0->add_subcommand("hom", "K0 matrix of a homomorphism");
  k0_hom->add_option("input", file, "Homomorphism JSON")->required()->check(CLI::ExistingFile);
  k0_hom->callback([&] { action = [&] { return k0_hom_cmd(file, o); }; });
  CLI::App* k0_equal = k0->add_subcommand("equal", "Equality in the limit group");
  k0_equal->add_option("diagram", file, "Bratteli JSON")->required()->check(CLI::ExistingFile);
  k0_equal->add_option("--x", x)->required();
  k0_equal->add_option("--y", y)->required();
  k0_equal->callback([&] { action = [&] { return bratteli_cmd(file, x, y, "k0 equal", o); }; });
  CLI::App* k0_positive = k0->add_subcommand("positive", "Positivity in the limit group");
  k0_positive->add_option("diagram", file, "Bratteli JSON")->required()->check(CLI::ExistingFile);
  k0_positive->add_option("--x", x)->required();
  k0_positive->callback([&] { action = [&] { return bratteli_cmd(file, x, "", "k0 positive", o); }; });
  CLI::App* k0_index = k0->add_subcommand("index", "Index map");
  k0_index->add_option("--ker", ker, "Class of 1 - v*v (formal variant)");
  k0_index->add_option("--coker", coker, "Class of 1 - vv* (formal variant)");
  k0_index->add_option("algebra", file, "Algebra JSON (matrix variant)")->check(CLI::ExistingFile);
  k0_index->add_option("partial_isometry", file2, "Matrix JSON (matrix variant)")->check(CLI::ExistingFile);
  k0_index->add_option("--ideal", ideal, "Ideal block indices")->delimiter(',');
  k0_index->callback([&] { action = [&] { return k0_index_cmd(ker, coker, file, file2, ideal, o); }; });

  std::vector<std::string> argv_store{"opalg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_store) argv.push_back(s.data());

  std::ostringstream out, err;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {code == 0 ? 0 : 2, out.str(), err.str()};
  }

  try {
    const Report r = action();
    return {0, o.format == "json" ? io::dump(r.json) : r.text, ""};
  } catch (const Error& e) {
    return {e.kind() == "ParseError" ? 2 : 1, "", std::string("error: ") + e.what() + "\n"};
  } catch (const nlohmann::json::exception& e) {
    return {2, "", std::string("error: parse: ") + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {1, "", std::string("error: ") + e.what() + "\n"};
  }
}

}  // namespace opalg::cli
