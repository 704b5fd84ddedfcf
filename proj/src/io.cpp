#include "opalg/io.hpp"

#include <fstream>
#include <sstream>

namespace opalg::io {

void parse_error(const std::string& what, const std::string& detail) { throw Error(what, "ParseError", detail); }

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("read_file", "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    parse_error("read_file", path + ": " + e.what());
  }
}

namespace {

const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) parse_error(what, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::size_t size_value(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) parse_error(what, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::vector<Matrix> matrices_from_json(const Json& j, const char* what) {
  if (!j.is_array()) parse_error(what, "expected an array of matrices");
  std::vector<Matrix> out;
  for (const Json& m : j) out.push_back(matrix_from_json(m));
  return out;
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Matrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(to_json(m(r, c)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Json to_json(const IntVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const IntMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  parse_error("complex", "expected a number or [re, im]");
}

Matrix matrix_from_json(const Json& j) {
  const char* what = "matrix";
  if (j.is_object()) {
    const std::size_t rows = size_value(field(j, "rows", what), what), cols = size_value(field(j, "cols", what), what);
    const Json& data = field(j, "data", what);
    if (!data.is_array() || data.size() != rows * cols) parse_error(what, "data length does not match rows * cols");
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t k = 0; k < data.size(); ++k)
      m(static_cast<Eigen::Index>(k / cols), static_cast<Eigen::Index>(k % cols)) = complex_from_json(data[k]);
    return m;
  }
  if (j.is_array()) {
    const std::size_t rows = j.size();
    const std::size_t cols = rows == 0 ? 0 : j[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      if (!j[r].is_array() || j[r].size() != cols) parse_error(what, "ragged rows");
      for (std::size_t c = 0; c < cols; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
    }
    return m;
  }
  parse_error(what, "expected an object or a nested array");
}

IntVector int_vector_from_json(const Json& j) {
  if (!j.is_array()) parse_error("integer vector", "expected an array");
  IntVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) parse_error("integer vector", "expected integers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<long long>();
  }
  return v;
}

IntMatrix int_matrix_from_json(const Json& j) {
  if (!j.is_array()) parse_error("integer matrix", "expected an array of rows");
  const std::size_t rows = j.size(), cols = rows == 0 ? 0 : j[0].size();
  IntMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const IntVector row = int_vector_from_json(j[r]);
    if (static_cast<std::size_t>(row.size()) != cols) parse_error("integer matrix", "ragged rows");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

FDCAlgebra algebra_from_json(const Json& j, const Tolerance& tol) {
  const char* what = "algebra";
  if (j.is_object() && j.contains("blocks")) {
    std::vector<std::size_t> sizes, mults;
    for (const Json& s : j.at("blocks")) sizes.push_back(size_value(s, what));
    if (j.contains("multiplicities"))
      for (const Json& m : j.at("multiplicities")) mults.push_back(size_value(m, what));
    else
      mults.assign(sizes.size(), 1);
    return block_diagonal_algebra(sizes, mults);
  }
  const std::size_t n = size_value(field(j, "ambient_dim", what), what);
  if (j.contains("basis")) return FDCAlgebra::from_span(n, matrices_from_json(j.at("basis"), what), tol);
  const bool unital = j.value("unital", true);
  return FDCAlgebra::generate(n, matrices_from_json(field(j, "generators", what), what), unital, tol);
}

FiniteGroup builtin_group(const std::string& name) {
  auto number = [&](std::size_t from) {
    try {
      return static_cast<std::size_t>(std::stoul(name.substr(from)));
    } catch (const std::exception&) {
      parse_error("group", "unknown builtin " + name);
    }
  };
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  if (name == "Z2xZ2") return FiniteGroup::product(z2, z2);
  if (name == "Z2xZ4") return FiniteGroup::product(z2, FiniteGroup::cyclic(4));
  if (name == "Z2xZ2xZ2") return FiniteGroup::product(FiniteGroup::product(z2, z2), z2);
  if (name == "Q8") return FiniteGroup::quaternion();
  if (name.rfind("Z/", 0) == 0) return FiniteGroup::cyclic(number(2));
  if (name.rfind("S", 0) == 0) return FiniteGroup::symmetric(number(1));
  if (name.rfind("D", 0) == 0) return FiniteGroup::dihedral(number(1));
  parse_error("group", "unknown builtin " + name);
}

FiniteGroup group_from_json(const Json& j) {
  const char* what = "group";
  if (j.is_object() && j.contains("builtin")) return builtin_group(j.at("builtin").get<std::string>());
  const Json& table = field(j, "table", what);
  if (!table.is_array()) parse_error(what, "table must be an array of rows");
  std::vector<std::vector<std::size_t>> rows;
  for (const Json& row : table) {
    if (!row.is_array()) parse_error(what, "table must be an array of rows");
    std::vector<std::size_t> r;
    for (const Json& v : row) r.push_back(size_value(v, what));
    rows.push_back(std::move(r));
  }
  return FiniteGroup(std::move(rows), j.value("name", std::string{}));
}

State state_from_json(const FDCAlgebra& a, const Json& j, const Tolerance& tol) {
  const char* what = "state";
  if (j.is_object() && j.contains("density")) return state_from_density(a, matrix_from_json(j.at("density")), tol);
  const Json& values = field(j, "values", what);
  if (!values.is_array()) parse_error(what, "values must be an array");
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(values[i]);
  return make_state(a, v, tol);
}

DynamicalSystem system_from_json(const Json& j, const Tolerance& tol) {
  const char* what = "system";
  const FDCAlgebra a = algebra_from_json(field(j, "algebra", what), tol);
  const FiniteGroup g = group_from_json(field(j, "group", what));
  if (j.contains("maps")) return DynamicalSystem::from_maps(a, g, matrices_from_json(j.at("maps"), what), tol);
  if (j.contains("action")) return DynamicalSystem::from_unitaries(a, g, matrices_from_json(j.at("action"), what), tol);
  return DynamicalSystem::trivial(a, g);
}

BratteliDiagram bratteli_from_json(const Json& j) {
  const char* what = "bratteli";
  if (j.is_object() && j.contains("builtin")) {
    if (j.at("builtin") != "car") parse_error(what, "unknown builtin diagram");
    return BratteliDiagram::car(size_value(field(j, "depth", what), what));
  }
  BratteliDiagram d;
  for (const Json& l : field(j, "levels", what)) d.levels.push_back(int_vector_from_json(l));
  for (const Json& m : field(j, "maps", what)) d.maps.push_back(int_matrix_from_json(m));
  d.unital = j.value("unital", false);
  d.validate();
  return d;
}

K0Class k0_from_json(const Json& j) {
  const char* what = "k0 class";
  return {size_value(field(j, "level", what), what), int_vector_from_json(field(j, "vector", what))};
}

K0Class k0_from_string(const std::string& s) {
  const auto colon = s.find(':');
  K0Class out;
  std::string body = s;
  try {
    if (colon != std::string::npos) {
      out.level = std::stoul(s.substr(0, colon));
      body = s.substr(colon + 1);
    }
    std::vector<long long> entries;
    std::stringstream in(body);
    std::string item;
    while (std::getline(in, item, ',')) entries.push_back(std::stoll(item));
    out.vector = IntVector::Map(entries.data(), static_cast<Eigen::Index>(entries.size()));
  } catch (const std::exception&) {
    parse_error("k0 class", "expected LEVEL:v1,v2,... but got " + s);
  }
  return out;
}

Json to_json(const K0Class& c) { return Json{{"level", c.level}, {"vector", to_json(c.vector)}}; }

Json to_json(const SpectrumResult& s) {
  Json eig = Json::array(), res = Json::array();
  for (Complex z : s.eigenvalues) eig.push_back(to_json(z));
  for (double r : s.residuals) res.push_back(r);
  return Json{{"eigenvalues", eig}, {"residuals", res}, {"normal", s.diagonalization.has_value()}};
}

Json to_json(const std::vector<BlockInfo>& blocks) {
  Json out = Json::array();
  for (const BlockInfo& b : blocks)
    out.push_back(Json{{"block_size", b.block_size}, {"multiplicity", b.multiplicity}, {"rank", b.rank()}});
  return out;
}

Json to_json(const GNSResult& g) {
  return Json{{"hilbert_dim", g.hilbert_dim},
              {"cyclic_rank", g.cyclic_rank},
              {"reconstruction_residual", g.reconstruction_residual},
              {"cyclic_vector", to_json(Matrix(g.cyclic_vector))}};
}

Json to_json(const std::vector<Character>& dual) {
  Json out = Json::array();
  for (const Character& c : dual) {
    Json row = Json::array();
    for (Eigen::Index s = 0; s < c.values.size(); ++s) row.push_back(to_json(c.values(s)));
    out.push_back(row);
  }
  return out;
}

Json to_json(const StoneVonNeumannReport& r) {
  return Json{{"group_order", r.group_order},         {"is_single_block", r.is_single_block},
              {"block_size", r.block_size},           {"multiplicity", r.multiplicity},
              {"matrix_unit_residual", r.matrix_unit_residual}, {"relation_residual", r.relation_residual},
              {"passed", r.passed}};
}

Json to_json(const AxiomReport& r) {
  return Json{{"left_sesquilinearity", r.left_sesquilinearity},
              {"right_sesquilinearity", r.right_sesquilinearity},
              {"left_adjointable", r.left_adjointable},
              {"right_adjointable", r.right_adjointable},
              {"associativity", r.associativity},
              {"contractivity", r.contractivity},
              {"norm_compatibility", r.norm_compatibility},
              {"gram_left", r.gram_left},
              {"gram_right", r.gram_right},
              {"span_left", r.span_left},
              {"span_right", r.span_right},
              {"full_left", r.full_left},
              {"full_right", r.full_right},
              {"worst", r.worst()}};
}

Json to_json(const BlockCorrespondence& b) {
  return Json{{"blocks_left", to_json(b.blocks_left)},
              {"blocks_right", to_json(b.blocks_right)},
              {"irreps_of_subgroup", b.irreps_of_subgroup},
              {"induced_ranks", b.induced_ranks},
              {"matched", b.matched}};
}

Json to_json(const BratteliDiagram& d) {
  Json levels = Json::array(), maps = Json::array();
  for (const IntVector& l : d.levels) levels.push_back(to_json(l));
  for (const IntMatrix& m : d.maps) maps.push_back(to_json(m));
  return Json{{"levels", levels}, {"maps", maps}, {"unital", d.unital}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace opalg::io
