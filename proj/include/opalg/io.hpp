#pragma once

// JSON encodings of the library's inputs and reports.
//
// Matrix: {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major
// order; a nested array of real numbers or [re, im] pairs is accepted too.

#include <string>
#include <vector>

#include "json.hpp"

#include "opalg/calculus.hpp"
#include "opalg/crossed.hpp"
#include "opalg/gns.hpp"
#include "opalg/ktheory.hpp"
#include "opalg/morita.hpp"

namespace opalg::io {

using Json = nlohmann::ordered_json;

/// Malformed input surfaces as Error(<what>, "ParseError", ...).
[[noreturn]] void parse_error(const std::string& what, const std::string& detail);

Json read_file(const std::string& path);

Json to_json(Complex z);
Json to_json(const Matrix& m);
Json to_json(const IntVector& v);
Json to_json(const IntMatrix& m);
Complex complex_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
IntVector int_vector_from_json(const Json& j);
IntMatrix int_matrix_from_json(const Json& j);

/// {"ambient_dim": N, "basis": [...]} or {"ambient_dim": N, "generators": [...], "unital": bool}
/// or {"blocks": [n...], "multiplicities": [m...]}.
FDCAlgebra algebra_from_json(const Json& j, const Tolerance& tol = {});
/// {"table": [[...]], "name": "..."} or {"builtin": "S3" | "Z/5" | "D4" | "Q8" | "Z2xZ2" | ...}.
FiniteGroup group_from_json(const Json& j);
FiniteGroup builtin_group(const std::string& name);
/// {"values": [...]} on the algebra's basis, or {"density": matrix}.
State state_from_json(const FDCAlgebra& a, const Json& j, const Tolerance& tol = {});
/// {"algebra": ..., "group": ..., "action": [unitaries]} or "maps" instead of "action".
DynamicalSystem system_from_json(const Json& j, const Tolerance& tol = {});
/// {"levels": [[sizes]...], "maps": [[[ints]]...], "unital": bool}, or {"builtin": "car", "depth": n}.
BratteliDiagram bratteli_from_json(const Json& j);
/// {"level": n, "vector": [ints]}
K0Class k0_from_json(const Json& j);
/// "L:v1,v2,..." as used on the command line.
K0Class k0_from_string(const std::string& s);

Json to_json(const K0Class& c);
Json to_json(const SpectrumResult& s);
Json to_json(const std::vector<BlockInfo>& blocks);
Json to_json(const GNSResult& g);
Json to_json(const std::vector<Character>& dual);
Json to_json(const StoneVonNeumannReport& r);
Json to_json(const AxiomReport& r);
Json to_json(const BlockCorrespondence& b);
Json to_json(const BratteliDiagram& d);

/// Stable rendering: two-space indentation, insertion-ordered keys.
std::string dump(const Json& j);

}  // namespace opalg::io
