#include "bregman/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bregman/errors.hpp"
#include "bregman/orlicz.hpp"

namespace bregman::io {
namespace {

std::string format_double(double v, int precision) {
  if (!std::isfinite(v))
    throw ValidationError("non-finite number in JSON document");
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, precision);
  return std::string(buf.data(), res.ptr);
}

void dump(const Json& j, std::string& out) {
  if (j.is_object()) {
    out += '{';
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) out += ", ";
      first = false;
      out += Json(key).dump();
      out += ": ";
      dump(value, out);
    }
    out += '}';
  } else if (j.is_array()) {
    out += '[';
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i > 0) out += ", ";
      dump(j[i], out);
    }
    out += ']';
  } else if (j.is_string()) {
    out += j.dump();  // nlohmann handles the escaping
  } else if (j.is_boolean()) {
    out += j.get<bool>() ? "true" : "false";
  } else if (j.is_null()) {
    out += "null";
  } else if (j.is_number_integer() || j.is_number_unsigned()) {
    out += std::to_string(j.get<std::int64_t>());
  } else {
    out += format_double(j.get<double>(), kJsonSignificantDigits);
  }
}

// --- strict schema plumbing -------------------------------------------------

const Json& expect_object(const Json& j, const std::string& who) {
  if (!j.is_object()) throw ParseError(who + " must be a JSON object");
  return j;
}

void expect_fields(const Json& j,
                   std::initializer_list<std::string_view> allowed,
                   const std::string& who) {
  expect_object(j, who);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known)
      throw ParseError("unknown field '" + key + "' in " + who);
  }
}

const Json& require_field(const Json& j, const std::string& key,
                          const std::string& who) {
  expect_object(j, who);
  const auto it = j.find(key);
  if (it == j.end())
    throw ParseError(who + " is missing the '" + key + "' field");
  return *it;
}

double as_number(const Json& j, const std::string& who) {
  if (!j.is_number()) throw ParseError(who + " must be a number");
  return j.get<double>();
}

std::int64_t as_integer(const Json& j, const std::string& who) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    throw ParseError(who + " must be an integer");
  return j.get<std::int64_t>();
}

std::string as_string(const Json& j, const std::string& who) {
  if (!j.is_string()) throw ParseError(who + " must be a string");
  return j.get<std::string>();
}

bool as_boolean(const Json& j, const std::string& who) {
  if (!j.is_boolean()) throw ParseError(who + " must be a boolean");
  return j.get<bool>();
}

// Vocabulary lookups live behind ValidationError in their home modules;
// inside a document a bad name is a schema problem, so rewrap.
template <typename F>
auto vocabulary(const F& lookup) {
  try {
    return lookup();
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
}

std::string norm_name(NormKind norm) {
  return norm == NormKind::Euclidean ? "euclidean" : "p-norm";
}

NormKind norm_from_name(const std::string& name) {
  if (name == "euclidean") return NormKind::Euclidean;
  if (name == "p-norm") return NormKind::PNorm;
  throw ParseError("unknown norm '" + name + "'");
}

std::string side_name(Side side) {
  return side == Side::Left ? "left" : "right";
}

Side side_from_name(const std::string& name) {
  if (name == "left") return Side::Left;
  if (name == "right") return Side::Right;
  throw ParseError("unknown side '" + name + "'");
}

Json table_to_json(const MonotoneCurve& curve) {
  Json table = Json::array();
  for (Eigen::Index i = 0; i < curve.knots().size(); ++i)
    table.push_back(Json::array({curve.knots()[i], curve.values()[i]}));
  return table;
}

std::vector<std::array<double, 2>> table_from_json(const Json& j,
                                                   const std::string& who) {
  if (!j.is_array()) throw ParseError(who + " must be an array of [t, v] rows");
  std::vector<std::array<double, 2>> table;
  for (const Json& row : j) {
    if (!row.is_array() || row.size() != 2)
      throw ParseError(who + " rows must be [t, v] pairs");
    table.push_back({as_number(row[0], who + " knot"),
                     as_number(row[1], who + " value")});
  }
  return table;
}

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());  // message carries line/column position
  }
}

std::string write(const Json& doc) {
  std::string out;
  dump(doc, out);
  return out;
}

std::string csv_number(double v) {
  return format_double(v, kCsvSignificantDigits);
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Eigen::VectorXd vector_from_json(const Json& j, const std::string& who) {
  if (!j.is_array()) throw ParseError(who + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = as_number(j[static_cast<std::size_t>(i)],
                     who + " entry " + std::to_string(i));
  return v;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    rows.push_back(vector_to_json(m.row(i).transpose()));
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& who) {
  if (!j.is_array() || j.empty())
    throw ParseError(who + " must be a non-empty array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::VectorXd row = vector_from_json(
        j[static_cast<std::size_t>(i)], who + " row " + std::to_string(i));
    if (i == 0) {
      if (row.size() == 0) throw ParseError(who + " rows must be non-empty");
      m.resize(rows, row.size());
    } else if (row.size() != m.cols()) {
      throw ParseError(who + " rows have inconsistent lengths");
    }
    m.row(i) = row.transpose();
  }
  return m;
}

Json hermitian_to_json(const Hermitian<std::complex<double>>& m) {
  Json j = Json::object();
  j["re"] = matrix_to_json(m.matrix().real());
  const Eigen::MatrixXd im = m.matrix().imag();
  if (im.cwiseAbs().maxCoeff() > 0.0) j["im"] = matrix_to_json(im);
  return j;
}

Hermitian<std::complex<double>> hermitian_from_json(const Json& j) {
  expect_fields(j, {"re", "im"}, "matrix");
  const Eigen::MatrixXd re =
      matrix_from_json(require_field(j, "re", "matrix"), "matrix 're'");
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(re.rows(), re.cols());
  if (j.contains("im")) {
    im = matrix_from_json(j["im"], "matrix 'im'");
    if (im.rows() != re.rows() || im.cols() != re.cols())
      throw ParseError("matrix 're' and 'im' must have matching shapes");
  }
  Eigen::MatrixXcd full(re.rows(), re.cols());
  full.real() = re;
  full.imag() = im;
  return Hermitian<std::complex<double>>(full);
}

Json potential_to_json(const PotentialSpec& spec) {
  Json params = Json::object();
  switch (spec.family) {
    case Family::GammaNorm:
      params["gamma"] = spec.gamma;
      break;
    case Family::AlphaPower:
      params["alpha"] = spec.alpha;
      break;
    case Family::NormIntegral:
      params["phi"] = table_to_json(spec.phi);
      params["norm"] = norm_name(spec.norm);
      if (spec.norm == NormKind::PNorm) params["p"] = spec.p;
      break;
    default:
      break;
  }
  Json j = Json::object();
  j["family"] = family_name(spec.family);
  j["params"] = params;
  j["dim"] = static_cast<std::int64_t>(spec.dim);
  return j;
}

PotentialSpec potential_from_json(const Json& j) {
  expect_fields(j, {"family", "params", "dim"}, "potential");
  const Family family = vocabulary([&] {
    return family_from_name(
        as_string(require_field(j, "family", "potential"), "'family'"));
  });
  const auto dim = static_cast<Eigen::Index>(
      as_integer(require_field(j, "dim", "potential"), "'dim'"));
  const Json params = j.contains("params") ? j["params"] : Json::object();
  expect_object(params, "potential 'params'");

  switch (family) {
    case Family::NegEntropy:
      expect_fields(params, {}, "neg-entropy params");
      return PotentialSpec::neg_entropy(dim);
    case Family::Burg:
      expect_fields(params, {}, "burg params");
      return PotentialSpec::burg(dim);
    case Family::FermiDirac:
      expect_fields(params, {}, "fermi-dirac params");
      return PotentialSpec::fermi_dirac(dim);
    case Family::GammaNorm:
      expect_fields(params, {"gamma"}, "gamma-norm params");
      return PotentialSpec::gamma_norm(
          dim, as_number(require_field(params, "gamma", "gamma-norm params"),
                         "'gamma'"));
    case Family::AlphaPower:
      expect_fields(params, {"alpha"}, "alpha-power params");
      return PotentialSpec::alpha_power(
          dim, as_number(require_field(params, "alpha", "alpha-power params"),
                         "'alpha'"));
    case Family::NormIntegral: {
      expect_fields(params, {"phi", "norm", "p"}, "norm-integral params");
      const auto table = table_from_json(
          require_field(params, "phi", "norm-integral params"), "'phi'");
      const NormKind norm = norm_from_name(as_string(
          require_field(params, "norm", "norm-integral params"), "'norm'"));
      if (norm == NormKind::Euclidean && params.contains("p"))
        throw ParseError("'p' is only meaningful for the p-norm");
      const double p =
          norm == NormKind::PNorm
              ? as_number(require_field(params, "p", "norm-integral params"),
                          "'p'")
              : 2.0;
      return build_norm_integral_potential(table, norm, dim, p);
    }
  }
  throw ParseError("unknown potential family");  // unreachable
}

Json constraint_to_json(const ConstraintSet& set) {
  Json j = Json::object();
  switch (set.kind()) {
    case ConstraintSet::Kind::Affine:
      j["kind"] = "affine";
      j["A"] = matrix_to_json(set.eq_matrix());
      j["b"] = vector_to_json(set.eq_rhs());
      break;
    case ConstraintSet::Kind::Halfspaces: {
      j["kind"] = "halfspaces";
      Json rows = Json::array();
      Json rhs = Json::array();
      for (const Halfspace& h : set.halfspace_rows()) {
        rows.push_back(vector_to_json(h.a));
        rhs.push_back(h.c);
      }
      j["A"] = rows;
      j["b"] = rhs;
      break;
    }
    case ConstraintSet::Kind::Box:
      j["kind"] = "box";
      j["lo"] = vector_to_json(set.box_lo());
      j["hi"] = vector_to_json(set.box_hi());
      break;
    case ConstraintSet::Kind::Simplex:
      j["kind"] = "simplex";
      j["mass"] = set.simplex_mass();
      j["dim"] = static_cast<std::int64_t>(set.ambient_dim());
      break;
  }
  return j;
}

ConstraintSet constraint_from_json(const Json& j) {
  const std::string kind =
      as_string(require_field(j, "kind", "constraint"), "'kind'");
  if (kind == "affine") {
    expect_fields(j, {"kind", "A", "b"}, "affine constraint");
    return ConstraintSet::affine(
        matrix_from_json(require_field(j, "A", "affine constraint"), "'A'"),
        vector_from_json(require_field(j, "b", "affine constraint"), "'b'"));
  }
  if (kind == "halfspaces") {
    expect_fields(j, {"kind", "A", "b"}, "halfspaces constraint");
    const Eigen::MatrixXd a = matrix_from_json(
        require_field(j, "A", "halfspaces constraint"), "'A'");
    const Eigen::VectorXd b = vector_from_json(
        require_field(j, "b", "halfspaces constraint"), "'b'");
    if (a.rows() != b.size())
      throw ParseError("halfspaces 'A' and 'b' must have matching rows");
    std::vector<Halfspace> rows;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      rows.push_back({a.row(i).transpose(), b[i]});
    return ConstraintSet::halfspaces(std::move(rows), a.cols());
  }
  if (kind == "box") {
    expect_fields(j, {"kind", "lo", "hi"}, "box constraint");
    return ConstraintSet::box(
        vector_from_json(require_field(j, "lo", "box constraint"), "'lo'"),
        vector_from_json(require_field(j, "hi", "box constraint"), "'hi'"));
  }
  if (kind == "simplex") {
    expect_fields(j, {"kind", "mass", "dim"}, "simplex constraint");
    return ConstraintSet::simplex(
        as_number(require_field(j, "mass", "simplex constraint"), "'mass'"),
        static_cast<Eigen::Index>(as_integer(
            require_field(j, "dim", "simplex constraint"), "'dim'")));
  }
  throw ParseError("unknown constraint kind '" + kind + "'");
}

Json projection_to_json(const ProjectionResult& result, bool include_trace) {
  Json j = Json::object();
  j["point"] = vector_to_json(result.point);
  j["value"] = result.value;
  j["iterations"] = result.iterations;
  j["kkt_residual"] = result.kkt_residual;
  j["side"] = side_name(result.side);
  if (include_trace) {
    Json trace = Json::array();
    for (double r : result.trace) trace.push_back(r);
    j["trace"] = trace;
  }
  return j;
}

ProjectionResult projection_from_json(const Json& j) {
  expect_fields(j, {"point", "value", "iterations", "kkt_residual", "side",
                    "trace"},
                "projection result");
  ProjectionResult result;
  result.point =
      vector_from_json(require_field(j, "point", "projection result"),
                       "'point'");
  result.value =
      as_number(require_field(j, "value", "projection result"), "'value'");
  result.iterations = static_cast<int>(as_integer(
      require_field(j, "iterations", "projection result"), "'iterations'"));
  result.kkt_residual = as_number(
      require_field(j, "kkt_residual", "projection result"), "'kkt_residual'");
  result.side = side_from_name(
      as_string(require_field(j, "side", "projection result"), "'side'"));
  if (j.contains("trace")) {
    const Json& trace = j["trace"];
    if (!trace.is_array()) throw ParseError("'trace' must be an array");
    for (const Json& r : trace)
      result.trace.push_back(as_number(r, "'trace' entry"));
  }
  return result;
}

Json pythagoras_to_json(const PythagorasReport& report, bool include_trace) {
  Json j = Json::object();
  j["lhs"] = report.lhs;
  j["rhs"] = report.rhs;
  j["slack"] = report.slack;
  j["projection"] = projection_to_json(report.projection, include_trace);
  return j;
}

PythagorasReport pythagoras_from_json(const Json& j) {
  expect_fields(j, {"lhs", "rhs", "slack", "projection"}, "pythagoras report");
  PythagorasReport report;
  report.lhs = as_number(require_field(j, "lhs", "pythagoras report"), "'lhs'");
  report.rhs = as_number(require_field(j, "rhs", "pythagoras report"), "'rhs'");
  report.slack =
      as_number(require_field(j, "slack", "pythagoras report"), "'slack'");
  report.projection =
      projection_from_json(require_field(j, "projection", "pythagoras report"));
  return report;
}

Json legendre_to_json(const LegendreReport& report) {
  Json probes = Json::array();
  for (const BoundaryProbe& probe : report.probes) {
    Json p = Json::object();
    p["interior"] = vector_to_json(probe.interior);
    p["boundary"] = vector_to_json(probe.boundary);
    Json slopes = Json::array();
    for (double s : probe.slopes) slopes.push_back(s);
    p["slopes"] = slopes;
    p["decreasing"] = probe.decreasing;
    p["deep"] = probe.deep;
    probes.push_back(std::move(p));
  }
  Json j = Json::object();
  j["roundtrip_residual"] = report.roundtrip_residual;
  j["roundtrip_pass"] = report.roundtrip_pass;
  j["probes"] = std::move(probes);
  j["boundary_pass"] = report.boundary_pass;
  j["pass"] = report.pass;
  return j;
}

LegendreReport legendre_from_json(const Json& j) {
  expect_fields(j, {"roundtrip_residual", "roundtrip_pass", "probes",
                    "boundary_pass", "pass"},
                "legendre report");
  LegendreReport report;
  report.roundtrip_residual = as_number(
      require_field(j, "roundtrip_residual", "legendre report"),
      "'roundtrip_residual'");
  report.roundtrip_pass = as_boolean(
      require_field(j, "roundtrip_pass", "legendre report"),
      "'roundtrip_pass'");
  const Json& probes = require_field(j, "probes", "legendre report");
  if (!probes.is_array()) throw ParseError("'probes' must be an array");
  for (const Json& p : probes) {
    expect_fields(p, {"interior", "boundary", "slopes", "decreasing", "deep"},
                  "boundary probe");
    BoundaryProbe probe;
    probe.interior = vector_from_json(
        require_field(p, "interior", "boundary probe"), "'interior'");
    probe.boundary = vector_from_json(
        require_field(p, "boundary", "boundary probe"), "'boundary'");
    const Json& slopes = require_field(p, "slopes", "boundary probe");
    if (!slopes.is_array()) throw ParseError("'slopes' must be an array");
    for (const Json& s : slopes)
      probe.slopes.push_back(as_number(s, "'slopes' entry"));
    probe.decreasing = as_boolean(
        require_field(p, "decreasing", "boundary probe"), "'decreasing'");
    probe.deep =
        as_boolean(require_field(p, "deep", "boundary probe"), "'deep'");
    report.probes.push_back(std::move(probe));
  }
  report.boundary_pass = as_boolean(
      require_field(j, "boundary_pass", "legendre report"), "'boundary_pass'");
  report.pass =
      as_boolean(require_field(j, "pass", "legendre report"), "'pass'");
  return report;
}

Json geometry_report_to_json(const GeometryReport& report) {
  Json j = Json::object();
  j["point"] = vector_to_json(report.point);
  j["metric"] = matrix_to_json(report.metric);
  j["gamma"] = report.gamma.data();       // flattened row-major [i][j][k]
  j["gamma_dual"] = report.gamma_dual.data();
  j["norden_sen_residual"] = report.norden_sen_residual;
  j["flatness_residual"] = report.flatness_residual;
  return j;
}

GeometryReport geometry_report_from_json(const Json& j) {
  expect_fields(j, {"point", "metric", "gamma", "gamma_dual",
                    "norden_sen_residual", "flatness_residual"},
                "geometry report");
  GeometryReport report;
  report.point = vector_from_json(
      require_field(j, "point", "geometry report"), "'point'");
  const Eigen::Index n = report.point.size();
  report.metric = matrix_from_json(
      require_field(j, "metric", "geometry report"), "'metric'");
  if (report.metric.rows() != n || report.metric.cols() != n)
    throw ParseError("'metric' must be square with the point's dimension");
  const auto tensor = [&](const std::string& key) {
    const Eigen::VectorXd flat =
        vector_from_json(require_field(j, key, "geometry report"),
                         "'" + key + "'");
    if (flat.size() != n * n * n)
      throw ParseError("'" + key + "' must hold dim^3 entries");
    Tensor3 t(n);
    Eigen::Index at = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index jj = 0; jj < n; ++jj)
        for (Eigen::Index k = 0; k < n; ++k) t(i, jj, k) = flat[at++];
    return t;
  };
  report.gamma = tensor("gamma");
  report.gamma_dual = tensor("gamma_dual");
  report.norden_sen_residual = as_number(
      require_field(j, "norden_sen_residual", "geometry report"),
      "'norden_sen_residual'");
  report.flatness_residual = as_number(
      require_field(j, "flatness_residual", "geometry report"),
      "'flatness_residual'");
  return report;
}

Json spin_to_json(const SpinFactorElement& z) {
  Json j = Json::object();
  j["lambda"] = z.lambda;
  j["x"] = vector_to_json(z.x);
  return j;
}

SpinFactorElement spin_from_json(const Json& j) {
  expect_fields(j, {"lambda", "x"}, "spin-factor element");
  SpinFactorElement z;
  z.lambda = as_number(require_field(j, "lambda", "spin-factor element"),
                       "'lambda'");
  z.x = vector_from_json(require_field(j, "x", "spin-factor element"), "'x'");
  return z;
}

Json generalized_to_json(const GeneralizedGeometry& g) {
  const EmbeddingSpec& e = g.embedding();
  Json emb = Json::object();
  emb["kind"] = embedding_kind_name(e.kind());
  Json pot = Json::object();
  switch (e.kind()) {
    case EmbeddingKind::MazurPower:
      emb["carrier"] = carrier_kind_name(e.carrier());
      emb["gamma"] = e.gamma();
      emb["dim"] = static_cast<std::int64_t>(g.dim());
      pot["alpha"] = g.alpha();
      pot["beta"] = g.beta();
      break;
    case EmbeddingKind::SpinFactorSlice:
      pot = potential_to_json(g.potential());
      break;
    case EmbeddingKind::OrliczInverse:
      emb["phi"] = table_to_json(e.phi().curve());
      emb["weights"] = vector_to_json(e.weights());
      pot["beta"] = g.beta();
      break;
  }
  Json j = Json::object();
  j["embedding"] = std::move(emb);
  j["potential"] = std::move(pot);
  return j;
}

GeneralizedGeometry generalized_from_json(const Json& j) {
  expect_fields(j, {"embedding", "potential"}, "generalized geometry");
  const Json& emb = require_field(j, "embedding", "generalized geometry");
  const Json& pot = require_field(j, "potential", "generalized geometry");
  const EmbeddingKind kind = vocabulary([&] {
    return embedding_kind_from_name(
        as_string(require_field(emb, "kind", "embedding"), "'kind'"));
  });
  switch (kind) {
    case EmbeddingKind::MazurPower: {
      expect_fields(emb, {"kind", "carrier", "gamma", "dim"}, "embedding");
      expect_fields(pot, {"alpha", "beta"}, "potential pairing");
      const CarrierKind carrier = vocabulary([&] {
        return carrier_kind_from_name(
            as_string(require_field(emb, "carrier", "embedding"), "'carrier'"));
      });
      return GeneralizedGeometry::mazur(
          as_number(require_field(pot, "alpha", "potential pairing"),
                    "'alpha'"),
          as_number(require_field(pot, "beta", "potential pairing"), "'beta'"),
          as_number(require_field(emb, "gamma", "embedding"), "'gamma'"),
          carrier,
          static_cast<Eigen::Index>(
              as_integer(require_field(emb, "dim", "embedding"), "'dim'")));
    }
    case EmbeddingKind::SpinFactorSlice:
      expect_fields(emb, {"kind"}, "embedding");
      return GeneralizedGeometry::spin_factor(potential_from_json(pot));
    case EmbeddingKind::OrliczInverse: {
      expect_fields(emb, {"kind", "phi", "weights"}, "embedding");
      expect_fields(pot, {"beta"}, "potential pairing");
      return GeneralizedGeometry::orlicz(
          OrliczFunction::from_table(table_from_json(
              require_field(emb, "phi", "embedding"), "'phi'")),
          vector_from_json(require_field(emb, "weights", "embedding"),
                           "'weights'"),
          as_number(require_field(pot, "beta", "potential pairing"),
                    "'beta'"));
    }
  }
  throw ParseError("unknown embedding kind");  // unreachable
}

}  // namespace bregman::io
