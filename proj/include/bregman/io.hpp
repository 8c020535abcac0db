#pragma once

#include <Eigen/Core>

#include <complex>
#include <string>

#include "bregman/constraints.hpp"
#include "bregman/embeddings.hpp"
#include "bregman/geometry.hpp"
#include "bregman/hermitian.hpp"
#include "bregman/potentials.hpp"
#include "bregman/projection.hpp"
#include "json.hpp"

namespace bregman::io {

/// Insertion-ordered documents keep the emitted field order stable, which
/// together with the fixed float format makes serialization byte-identical
/// across runs.
using Json = nlohmann::ordered_json;

/// Significant digits used when printing floating-point numbers: enough for
/// a lossless JSON round trip, fewer for readable CSV rows.
inline constexpr int kJsonSignificantDigits = 17;
inline constexpr int kCsvSignificantDigits = 9;

/// Parse with a byte-position-annotated ParseError instead of a foreign
/// exception type.
Json parse(const std::string& text);

/// Deterministic compact writer: floats at 17 significant digits (lossless
/// double round trip), integers verbatim, keys in insertion order, no
/// trailing newline.  Non-finite numbers are refused (ValidationError) —
/// they cannot be represented in JSON and never occur in valid results.
std::string write(const Json& doc);

/// One double at the CSV precision (9 significant digits).
std::string csv_number(double v);

/// Readers check schemas strictly: a field outside the schema, a missing
/// required field, or a value of the wrong JSON type is a ParseError.
/// Semantic violations (bad parameter ranges, non-hermitian matrices, ...)
/// surface as the library's usual ValidationError / DomainError.

Json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j, const std::string& who);

Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& who);

/// {"re": [[...]], "im": [[...]]} with "im" omitted when the matrix is real.
Json hermitian_to_json(const Hermitian<std::complex<double>>& m);
Hermitian<std::complex<double>> hermitian_from_json(const Json& j);

/// {"family": ..., "params": {...}, "dim": n}; φ tables as [[t, φ(t)], ...].
Json potential_to_json(const PotentialSpec& spec);
PotentialSpec potential_from_json(const Json& j);

/// {"kind": "affine", "A": [[...]], "b": [...]} and the box / halfspaces /
/// simplex analogues.
Json constraint_to_json(const ConstraintSet& set);
ConstraintSet constraint_from_json(const Json& j);

Json projection_to_json(const ProjectionResult& result, bool include_trace);
ProjectionResult projection_from_json(const Json& j);

Json pythagoras_to_json(const PythagorasReport& report, bool include_trace);
PythagorasReport pythagoras_from_json(const Json& j);

Json legendre_to_json(const LegendreReport& report);
LegendreReport legendre_from_json(const Json& j);

/// Tensors flattened row-major, index order Γ[i][j][k]; the dimension is the
/// length of "point".
Json geometry_report_to_json(const GeometryReport& report);
GeometryReport geometry_report_from_json(const Json& j);

Json spin_to_json(const SpinFactorElement& z);
SpinFactorElement spin_from_json(const Json& j);

/// {"embedding": {...}, "potential": {...}}.  The potential block holds the
/// carrier pairing: (alpha, beta) for power carriers, the full potential for
/// spin factors, beta alone for Orlicz geometries.
Json generalized_to_json(const GeneralizedGeometry& g);
GeneralizedGeometry generalized_from_json(const Json& j);

}  // namespace bregman::io
