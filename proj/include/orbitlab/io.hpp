#pragma once

#include "orbitlab/lie_algebra.hpp"
#include "orbitlab/volume.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace orbitlab::io {

using Json = nlohmann::json;

/// Parses JSON text; syntax errors become FormatError("line N", ...).
Json parse_json(const std::string& text, const std::string& source);
/// InputError if the file cannot be read.
Json read_json_file(const std::string& path);

enum class InputKind { Algebra, InnerProduct, Weights, Stratum, Theta };

/// Decided by the defining key: brackets, gram, weights, beta, theta.
InputKind detect_kind(const Json& doc, const std::string& source);

/// {"dim", "basis"?, "brackets": [{"i","j","k","c"}], "tolerance"?}. Only i < j
/// entries are allowed. `tolerance` overrides the file's value when given.
LieAlgebra algebra_from_json(const Json& doc, std::optional<double> tolerance = std::nullopt);
/// Tolerance recorded in an algebra file, if any.
std::optional<double> file_tolerance(const Json& doc);

/// Rectangular numeric array at doc[field]; `rows`/`cols` < 0 means any.
Matrix matrix_field(const Json& doc, const std::string& field, int rows = -1, int cols = -1);
/// {"dim", "gram"}
InnerProduct inner_product_from_json(const Json& doc, double tolerance = LieAlgebra::kDefaultTolerance);
/// {"weights": [..]}
WeightVector weights_from_json(const Json& doc, double tolerance = LieAlgebra::kDefaultTolerance);

/// Sorted keys, two-space indent, doubles as %.17g, non-finite numbers as null.
std::string dump(const Json& doc);
/// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

Json to_json(const Matrix& m);
Json to_json(const Vector& v);

/// Stable identifier: "fnv1a:<hex>" of the canonical bracket list.
std::string algebra_hash(const LieAlgebra& l);

}  // namespace orbitlab::io
