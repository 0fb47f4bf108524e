#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "schurgk/frobenius.hpp"
#include "schurgk/lab.hpp"
#include "schurgk/numcore.hpp"
#include "schurgk/structure.hpp"

namespace schurgk {

using Json = nlohmann::ordered_json;

// Matrix Market "array complex general": column-major "re im" lines.
Matrix read_matrix_market(std::istream& in);
void write_matrix_market(std::ostream& out, const Matrix& m);

// {"rows":r,"cols":c,"re":[...],"im":[...]} with row-major entries.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

// Chooses the format from the content: a leading '{' means JSON.
Matrix read_matrix(const std::string& path);
// ".json" suffix writes JSON, anything else Matrix Market.
void write_matrix(const std::string& path, const Matrix& m);

// {"eigs":[{"re","im","sizes"}],"m":[..],"k":[..]} (+ "warnings" when any).
Json structure_to_json(const JordanStructure& omega);
// block_map positions are written 1-based.
Json factorization_to_json(const TriangularJordanFactorization& f);
Json report_to_json(const ExperimentReport& r);
void write_report_csv(std::ostream& out, const ExperimentReport& r);

// Serializes with every floating-point number printed as %.17g, so decimal
// output round-trips bit-exactly; non-finite numbers become null.
std::string dump(const Json& j, int indent = 2);

}  // namespace schurgk
