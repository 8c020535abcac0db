#include <Eigen/Core>

#include <complex>
#include <string>

#include "bregman/constraints.hpp"
#include "bregman/embeddings.hpp"
#include "bregman/errors.hpp"
#include "bregman/geometry.hpp"
#include "bregman/hermitian.hpp"
#include "bregman/io.hpp"
#include "bregman/orlicz.hpp"
#include "bregman/potentials.hpp"
#include "bregman/projection.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bregman;
using io::Json;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

bool message_mentions(const std::exception& e, const std::string& needle) {
  return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("the writer is deterministic, compact, and lossless") {
  Json doc = Json::object();
  doc["third"] = 1.0 / 3.0;
  doc["tiny"] = 1e-13;
  doc["count"] = 42;
  doc["flag"] = true;
  doc["name"] = "burg";
  doc["row"] = Json::array({0.25, 0.75});

  const std::string once = io::write(doc);
  CHECK(once == io::write(doc));
  CHECK(once ==
        "{\"third\": 0.33333333333333331, \"tiny\": 1e-13, \"count\": 42, "
        "\"flag\": true, \"name\": \"burg\", \"row\": [0.25, 0.75]}");

  const Json back = io::parse(once);
  CHECK(back["third"].get<double>() == 1.0 / 3.0);  // bitwise round trip
  CHECK(back["tiny"].get<double>() == 1e-13);
  CHECK(back["count"].is_number_integer());

  CHECK(io::csv_number(1.0 / 3.0) == "0.333333333");
  CHECK(io::csv_number(2.0) == "2");

  Json bad = Json::object();
  bad["oops"] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(io::write(bad), ValidationError);

  try {
    io::parse("{\"a\": }");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(message_mentions(e, "column"));  // position-annotated
  }
}

TEST_CASE("potentials round-trip through their documents") {
  const PotentialSpec pnorm_integral = build_norm_integral_potential(
      testsupport::cubic_phi_table(), NormKind::PNorm, 3, 3.0);
  const std::vector<PotentialSpec> roster = {
      PotentialSpec::neg_entropy(2),
      PotentialSpec::burg(1),
      PotentialSpec::fermi_dirac(4),
      PotentialSpec::gamma_norm(2, 0.7),
      PotentialSpec::alpha_power(3, 0.4),
      build_norm_integral_potential(testsupport::linear_phi_table(),
                                    NormKind::Euclidean, 2),
      pnorm_integral,
  };
  for (const PotentialSpec& spec : roster) {
    const Json j = io::potential_to_json(spec);
    const PotentialSpec back = io::potential_from_json(j);
    CHECK(io::write(io::potential_to_json(back)) == io::write(j));
    CHECK(back.family == spec.family);
    CHECK(back.dim == spec.dim);
  }

  // a document is accepted with params omitted for parameter-free families
  const PotentialSpec ne = io::potential_from_json(
      io::parse("{\"family\": \"neg-entropy\", \"dim\": 3}"));
  CHECK(ne.dim == 3);

  SUBCASE("strict parsing rejects schema violations") {
    CHECK_THROWS_AS(io::potential_from_json(io::parse(
                        "{\"family\": \"burg\", \"dim\": 2, \"extra\": 1}")),
                    ParseError);
    CHECK_THROWS_AS(io::potential_from_json(io::parse(
                        "{\"family\": \"sinh\", \"dim\": 2}")),
                    ParseError);
    CHECK_THROWS_AS(io::potential_from_json(io::parse(
                        "{\"family\": \"gamma-norm\", \"params\": {}, "
                        "\"dim\": 2}")),
                    ParseError);
    CHECK_THROWS_AS(
        io::potential_from_json(io::parse(
            "{\"family\": \"burg\", \"params\": {\"gamma\": 0.5}, "
            "\"dim\": 2}")),
        ParseError);
    CHECK_THROWS_AS(io::potential_from_json(io::parse(
                        "{\"family\": \"burg\", \"dim\": 2.5}")),
                    ParseError);
    CHECK_THROWS_AS(io::potential_from_json(io::parse("[1, 2]")), ParseError);
    // semantic range errors are not parse errors
    CHECK_THROWS_AS(io::potential_from_json(io::parse(
                        "{\"family\": \"gamma-norm\", \"params\": "
                        "{\"gamma\": 1.5}, \"dim\": 2}")),
                    ValidationError);
  }
}

TEST_CASE("constraints round-trip through their documents") {
  MatrixXd a(1, 3);
  a << 1.0, 1.0, -2.0;
  VectorXd b(1);
  b << 0.4;
  std::vector<Halfspace> rows;
  rows.push_back({vec2(1.0, 0.0), 1.0});
  rows.push_back({vec2(-1.0, 2.0), 0.5});
  const std::vector<ConstraintSet> sets = {
      ConstraintSet::affine(a, b),
      ConstraintSet::halfspaces(rows, 2),
      ConstraintSet::box(vec2(0.1, 0.2), vec2(0.7, 0.9)),
      ConstraintSet::simplex(1.5, 4),
  };
  for (const ConstraintSet& set : sets) {
    const Json j = io::constraint_to_json(set);
    const ConstraintSet back = io::constraint_from_json(j);
    CHECK(io::write(io::constraint_to_json(back)) == io::write(j));
    CHECK(back.kind() == set.kind());
    CHECK(back.ambient_dim() == set.ambient_dim());
  }

  CHECK_THROWS_AS(
      io::constraint_from_json(io::parse("{\"kind\": \"cone\"}")), ParseError);
  CHECK_THROWS_AS(io::constraint_from_json(io::parse(
                      "{\"kind\": \"box\", \"lo\": [0], \"hi\": [1], "
                      "\"mass\": 2}")),
                  ParseError);
  CHECK_THROWS_AS(io::constraint_from_json(io::parse(
                      "{\"kind\": \"halfspaces\", \"A\": [[1, 0]], "
                      "\"b\": [1, 2]}")),
                  ParseError);
}

TEST_CASE("matrices round-trip with an optional imaginary part") {
  MatrixXd re(2, 2);
  re << 2.0, 0.5, 0.5, 1.0;
  const Hermitian<std::complex<double>> real_only(
      re.cast<std::complex<double>>());
  const Json jr = io::hermitian_to_json(real_only);
  CHECK(!jr.contains("im"));
  CHECK(io::write(io::hermitian_to_json(io::hermitian_from_json(jr))) ==
        io::write(jr));

  Eigen::MatrixXcd c(2, 2);
  c << std::complex<double>(1.0, 0.0), std::complex<double>(0.25, 0.4),
      std::complex<double>(0.25, -0.4), std::complex<double>(3.0, 0.0);
  const Json jc = io::hermitian_to_json(Hermitian<std::complex<double>>(c));
  CHECK(jc.contains("im"));
  const Hermitian<std::complex<double>> back = io::hermitian_from_json(jc);
  CHECK((back.matrix() - c).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(io::hermitian_from_json(io::parse(
                      "{\"re\": [[1, 2], [3]]}")),
                  ParseError);
  CHECK_THROWS_AS(io::hermitian_from_json(io::parse(
                      "{\"re\": [[1, 0], [0, 1]], \"im\": [[0]]}")),
                  ParseError);
  // structurally fine, semantically non-hermitian
  CHECK_THROWS_AS(io::hermitian_from_json(io::parse(
                      "{\"re\": [[1, 2], [0, 1]]}")),
                  ValidationError);
}

TEST_CASE("solver documents round-trip") {
  const PotentialSpec ne = PotentialSpec::neg_entropy(2);
  const ConstraintSet simplex = ConstraintSet::simplex(1.0, 2);
  SolveOptions opt;
  opt.keep_trace = true;
  const ProjectionResult pr = left_project(ne, simplex, vec2(1.0, 3.0), opt);

  const Json j = io::projection_to_json(pr, true);
  const ProjectionResult back = io::projection_from_json(j);
  CHECK(io::write(io::projection_to_json(back, true)) == io::write(j));
  CHECK(back.point == pr.point);
  CHECK(back.value == pr.value);
  CHECK(back.trace.size() == pr.trace.size());

  const Json lean = io::projection_to_json(pr, false);
  CHECK(!lean.contains("trace"));

  const PythagorasReport py =
      pythagoras_check(ne, simplex, vec2(1.0, 3.0), vec2(0.5, 0.5),
                       Side::Left);
  const Json jp = io::pythagoras_to_json(py, false);
  CHECK(io::write(io::pythagoras_to_json(io::pythagoras_from_json(jp),
                                         false)) == io::write(jp));

  const LegendreReport lr = check_euler_legendre(ne, 10, 0);
  const Json jl = io::legendre_to_json(lr);
  const LegendreReport lback = io::legendre_from_json(jl);
  CHECK(io::write(io::legendre_to_json(lback)) == io::write(jl));
  CHECK(lback.pass == lr.pass);
  CHECK(lback.probes.size() == lr.probes.size());

  CHECK_THROWS_AS(io::projection_from_json(io::parse(
                      "{\"point\": [1], \"value\": 0, \"iterations\": 0, "
                      "\"kkt_residual\": 0, \"side\": \"up\"}")),
                  ParseError);
}

TEST_CASE("geometry reports round-trip with flattened tensors") {
  const GeometryReport report =
      geometry_report(PotentialSpec::neg_entropy(2), vec2(0.5, 0.8), 8);
  const Json j = io::geometry_report_to_json(report);
  const GeometryReport back = io::geometry_report_from_json(j);
  CHECK(io::write(io::geometry_report_to_json(back)) == io::write(j));
  CHECK(back.metric == report.metric);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index jj = 0; jj < 2; ++jj)
      for (Eigen::Index k = 0; k < 2; ++k) {
        CHECK(back.gamma(i, jj, k) == report.gamma(i, jj, k));
        // row-major [i][j][k] is the documented layout
        CHECK(j["gamma_dual"][static_cast<std::size_t>((i * 2 + jj) * 2 + k)]
                  .get<double>() == report.gamma_dual(i, jj, k));
      }

  Json wrong = j;
  wrong["gamma"] = Json::array({1.0, 2.0});
  CHECK_THROWS_AS(io::geometry_report_from_json(wrong), ParseError);
}

TEST_CASE("generalized geometries round-trip") {
  const GeneralizedGeometry mazur =
      GeneralizedGeometry::mazur(0.9, 1.0 / 3.0, 0.5, CarrierKind::Vector, 2);
  const Json jm = io::generalized_to_json(mazur);
  const GeneralizedGeometry mback = io::generalized_from_json(jm);
  CHECK(io::write(io::generalized_to_json(mback)) == io::write(jm));
  CHECK(mback.dim() == 2);
  CHECK(mback.beta() == mazur.beta());
  // the reconstructed geometry computes identical divergences
  const VectorXd a = vec2(0.4, 0.9), b = vec2(0.7, 0.2);
  CHECK(pullback_div(mback, a, b) == pullback_div(mazur, a, b));

  const OrliczFunction phi = OrliczFunction::from_table(
      testsupport::phi_table([](double t) { return t * t; }, 2.0, 512));
  const VectorXd mu = VectorXd::Constant(3, 1.0 / 3.0);
  const GeneralizedGeometry orl = GeneralizedGeometry::orlicz(phi, mu, 0.5);
  const Json jo = io::generalized_to_json(orl);
  CHECK(io::write(io::generalized_to_json(io::generalized_from_json(jo))) ==
        io::write(jo));

  const GeneralizedGeometry spin = GeneralizedGeometry::spin_factor(
      build_norm_integral_potential(testsupport::linear_phi_table(4.0),
                                    NormKind::Euclidean, 3));
  const Json js = io::generalized_to_json(spin);
  const GeneralizedGeometry sback = io::generalized_from_json(js);
  CHECK(io::write(io::generalized_to_json(sback)) == io::write(js));

  const SpinFactorElement z{0.8, vec2(0.3, -0.2)};
  const Json jz = io::spin_to_json(z);
  const SpinFactorElement zback = io::spin_from_json(jz);
  CHECK(zback.lambda == z.lambda);
  CHECK(zback.x == z.x);

  CHECK_THROWS_AS(io::generalized_from_json(io::parse(
                      "{\"embedding\": {\"kind\": \"mazur-power\"}, "
                      "\"potential\": {\"alpha\": 1, \"beta\": 0.5}}")),
                  ParseError);
}
