// breg — command-line front end for the divergence library.
//
// Exit codes: 0 success, 1 malformed JSON input, 2 domain/configuration
// errors, 3 convergence failure, 4 a check or report command ran but the
// verified property fails its budget.  Diagnostics go to standard error;
// the output document goes to stdout or --output.

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bregman/constraints.hpp"
#include "bregman/divergence.hpp"
#include "bregman/embeddings.hpp"
#include "bregman/errors.hpp"
#include "bregman/geometry.hpp"
#include "bregman/hermitian.hpp"
#include "bregman/io.hpp"
#include "bregman/potentials.hpp"
#include "bregman/projection.hpp"
#include "bregman/spectral.hpp"
#include "bregman/verify.hpp"

namespace {

using bregman::ConstraintSet;
using bregman::DomainError;
using bregman::ParseError;
using bregman::PotentialSpec;
using bregman::Side;
using bregman::SolveOptions;
using bregman::ValidationError;
using bregman::io::Json;
using Eigen::VectorXd;

/// Inline JSON, or @path to read a file's contents.
std::string slurp(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1), std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + arg.substr(1) + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

VectorXd parse_vector(const std::string& arg, const std::string& who) {
  return bregman::io::vector_from_json(bregman::io::parse(slurp(arg)), who);
}

/// Flags shared by every potential-consuming command.  Either --potential
/// carries the full JSON document (the only route to norm-integral specs),
/// or --family names a closed-form family with --gamma/--alpha parameters.
struct PotentialFlags {
  std::string potential;
  std::string family;
  double gamma = 0.5;
  double alpha = 0.5;

  void attach(CLI::App* cmd) {
    cmd->add_option("--potential", potential,
                    "full potential document, inline JSON or @file");
    cmd->add_option("--family", family,
                    "potential family name (neg-entropy, burg, fermi-dirac, "
                    "gamma-norm, alpha-power)");
    cmd->add_option("--gamma", gamma, "gamma-norm exponent parameter");
    cmd->add_option("--alpha", alpha, "alpha-power exponent parameter");
  }

  bool given() const { return !potential.empty() || !family.empty(); }

  PotentialSpec resolve(Eigen::Index dim) const {
    if (!potential.empty() && !family.empty()) {
      throw ValidationError("--potential and --family are mutually exclusive");
    }
    if (!potential.empty()) {
      return bregman::io::potential_from_json(bregman::io::parse(slurp(potential)));
    }
    if (family == "neg-entropy") return PotentialSpec::neg_entropy(dim);
    if (family == "burg") return PotentialSpec::burg(dim);
    if (family == "fermi-dirac") return PotentialSpec::fermi_dirac(dim);
    if (family == "gamma-norm") return PotentialSpec::gamma_norm(dim, gamma);
    if (family == "alpha-power") return PotentialSpec::alpha_power(dim, alpha);
    if (family == "norm-integral") {
      throw ValidationError(
          "norm-integral needs its sample table; pass it via --potential");
    }
    throw ValidationError("unknown potential family '" + family + "'");
  }
};

/// `simplex:<mass>` shorthand, inline JSON, or @file.
ConstraintSet parse_constraint(const std::string& arg, Eigen::Index dim) {
  if (arg.rfind("simplex:", 0) == 0) {
    const double mass = std::stod(arg.substr(8));
    return ConstraintSet::simplex(mass, dim);
  }
  return bregman::io::constraint_from_json(bregman::io::parse(slurp(arg)));
}

Side parse_side(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  throw ValidationError("--side must be 'left' or 'right'");
}

struct OutputFlags {
  std::string format = "json";
  std::string path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--format", format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--output", path, "write the document here instead of stdout");
  }
};

std::string csv_cell(const Json& v) {
  if (v.is_number_float()) return bregman::io::csv_number(v.get<double>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  throw ValidationError("csv output supports scalar fields only");
}

/// One row per result: scalar fields become columns, vectors fan out into
/// indexed columns, nested documents are dropped.
std::string csv_document(const Json& doc) {
  std::string header, row;
  const auto add = [&](const std::string& name, const Json& v) {
    if (!header.empty()) {
      header += ",";
      row += ",";
    }
    header += name;
    row += csv_cell(v);
  };
  for (const auto& [key, value] : doc.items()) {
    if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_number() && !value[i].is_boolean() &&
            !value[i].is_string()) {
          continue;  // nested structures stay JSON-only
        }
        add(key + "_" + std::to_string(i), value[i]);
      }
    } else if (value.is_object()) {
      continue;
    } else {
      add(key, value);
    }
  }
  return header + "\n" + row + "\n";
}

std::string csv_report(const Json& doc) {
  std::string out = "property,pass,worst,budget\n";
  for (const auto& p : doc.at("properties")) {
    out += p.at("name").get<std::string>();
    out += p.at("pass").get<bool>() ? ",true," : ",false,";
    out += bregman::io::csv_number(p.at("worst").get<double>());
    out += ",";
    out += bregman::io::csv_number(p.at("budget").get<double>());
    out += "\n";
  }
  return out;
}

void emit(const Json& doc, const OutputFlags& out, bool report_layout = false) {
  std::string text;
  if (out.format == "csv") {
    text = report_layout ? csv_report(doc) : csv_document(doc);
  } else {
    text = bregman::io::write(doc) + "\n";
  }
  if (out.path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out.path, std::ios::binary);
    if (!f) throw ValidationError("cannot open output file '" + out.path + "'");
    f << text;
  }
}

double finite_or_domain_error(const bregman::ExtendedReal& v, const char* what) {
  if (!v.is_finite()) {
    throw DomainError(std::string(what) +
                      " is infinite: the arguments leave the potential's domain");
  }
  return v.value();
}

bregman::MatrixDivSpec matrix_family(const std::string& name, double gamma,
                                     double alpha) {
  if (name == "umegaki") return bregman::MatrixDivSpec::umegaki();
  if (name == "logdet") return bregman::MatrixDivSpec::logdet();
  if (name == "fermi") return bregman::MatrixDivSpec::fermi();
  if (name == "gamma-norm") return bregman::MatrixDivSpec::gamma_norm(gamma);
  if (name == "alpha") return bregman::MatrixDivSpec::alpha_power(alpha);
  throw ValidationError("unknown matrix family '" + name + "'");
}

// ---- command payloads ----------------------------------------------------

struct DivArgs {
  PotentialFlags pot;
  std::string matrix_fam;
  std::string geometry;
  std::string x, y;
  OutputFlags out;
};

int run_div(const DivArgs& a) {
  const int sources = (a.pot.given() ? 1 : 0) + (a.matrix_fam.empty() ? 0 : 1) +
                      (a.geometry.empty() ? 0 : 1);
  if (sources != 1) {
    throw ValidationError(
        "pick exactly one of --family/--potential, --matrix-family, or "
        "--geometry");
  }
  Json doc;
  if (!a.matrix_fam.empty()) {
    const auto fam = matrix_family(a.matrix_fam, a.pot.gamma, a.pot.alpha);
    const auto xi = bregman::io::hermitian_from_json(bregman::io::parse(slurp(a.x)));
    const auto zeta = bregman::io::hermitian_from_json(bregman::io::parse(slurp(a.y)));
    doc["value"] =
        finite_or_domain_error(bregman::matrix_div(fam, xi, zeta), "divergence");
  } else if (!a.geometry.empty()) {
    const auto g =
        bregman::io::generalized_from_json(bregman::io::parse(slurp(a.geometry)));
    bregman::ExtendedReal d = bregman::ExtendedReal::infinity();
    if (g.embedding().kind() == bregman::EmbeddingKind::SpinFactorSlice) {
      const auto v = bregman::io::spin_from_json(bregman::io::parse(slurp(a.x)));
      const auto w = bregman::io::spin_from_json(bregman::io::parse(slurp(a.y)));
      d = bregman::pullback_div(g, v, w);
    } else if (g.embedding().carrier() == bregman::CarrierKind::Matrix) {
      const auto va = bregman::io::hermitian_from_json(bregman::io::parse(slurp(a.x)));
      const auto vb = bregman::io::hermitian_from_json(bregman::io::parse(slurp(a.y)));
      d = bregman::pullback_div(g, va, vb);
    } else {
      d = bregman::pullback_div(g, parse_vector(a.x, "x"), parse_vector(a.y, "y"));
    }
    doc["value"] = finite_or_domain_error(d, "divergence");
  } else {
    const VectorXd x = parse_vector(a.x, "x");
    const VectorXd y = parse_vector(a.y, "y");
    const auto spec = a.pot.resolve(x.size());
    doc["value"] =
        finite_or_domain_error(bregman::bregman_div(spec, x, y), "divergence");
  }
  emit(doc, a.out);
  return 0;
}

struct ProjectArgs {
  PotentialFlags pot;
  std::string side = "left";
  std::string constraint;
  std::string y;
  bool trace = false;
  SolveOptions opts;
  OutputFlags out;
};

int run_project(const ProjectArgs& a) {
  const VectorXd y = parse_vector(a.y, "y");
  const auto spec = a.pot.resolve(y.size());
  const auto set = parse_constraint(a.constraint, y.size());
  SolveOptions opts = a.opts;
  opts.keep_trace = a.trace;
  const Side side = parse_side(a.side);
  const auto res = side == Side::Left
                       ? bregman::left_project(spec, set, y, opts)
                       : bregman::right_project(spec, set, y, opts);
  emit(bregman::io::projection_to_json(res, a.trace), a.out);
  return 0;
}

struct ConjugateArgs {
  PotentialFlags pot;
  std::string y;
  OutputFlags out;
};

int run_conjugate(const ConjugateArgs& a) {
  const VectorXd y = parse_vector(a.y, "y");
  const auto spec = a.pot.resolve(y.size());
  Json doc;
  doc["value"] = finite_or_domain_error(bregman::fenchel_conjugate(spec, y),
                                        "conjugate value");
  doc["gradient"] = bregman::io::vector_to_json(bregman::grad_conjugate(spec, y));
  emit(doc, a.out);
  return 0;
}

struct LegendreArgs {
  PotentialFlags pot;
  Eigen::Index dim = 2;
  int samples = 1000;
  std::uint64_t seed = 0;
  OutputFlags out;
};

int run_check_legendre(const LegendreArgs& a) {
  const auto spec = a.pot.resolve(a.dim);
  const auto report = bregman::check_euler_legendre(spec, a.samples, a.seed);
  emit(bregman::io::legendre_to_json(report), a.out);
  if (!report.pass) {
    std::cerr << "legendre check failed: roundtrip residual "
              << report.roundtrip_residual << ", boundary probes "
              << (report.boundary_pass ? "pass" : "fail") << "\n";
    return 4;
  }
  return 0;
}

struct PythagorasArgs {
  PotentialFlags pot;
  std::string side = "left";
  std::string constraint;
  std::string y, x;
  bool trace = false;
  SolveOptions opts;
  OutputFlags out;
};

int run_check_pythagoras(const PythagorasArgs& a) {
  const VectorXd y = parse_vector(a.y, "y");
  const VectorXd x = parse_vector(a.x, "x");
  const auto spec = a.pot.resolve(y.size());
  const auto set = parse_constraint(a.constraint, y.size());
  SolveOptions opts = a.opts;
  opts.keep_trace = a.trace;
  const auto report =
      bregman::pythagoras_check(spec, set, y, x, parse_side(a.side), opts);
  emit(bregman::io::pythagoras_to_json(report, a.trace), a.out);
  const bool affine = set.kind() == ConstraintSet::Kind::Affine;
  const bool ok = affine ? std::abs(report.slack) <= bregman::kAffineSlackBudget
                         : report.slack >= -bregman::kConvexSlackFloor;
  if (!ok) {
    std::cerr << "pythagoras check failed: slack " << report.slack
              << " breaches the " << (affine ? "affine" : "convex")
              << " budget\n";
    return 4;
  }
  return 0;
}

struct GeometryArgs {
  PotentialFlags pot;
  std::string point;
  int trials = 16;
  OutputFlags out;
};

int run_check_geometry(const GeometryArgs& a) {
  const VectorXd p = parse_vector(a.point, "point");
  const auto spec = a.pot.resolve(p.size());
  const auto report = bregman::geometry_report(spec, p, a.trials);
  emit(bregman::io::geometry_report_to_json(report), a.out);
  if (report.norden_sen_residual > bregman::kNordenSenBudget ||
      report.flatness_residual > bregman::kFlatnessBudget) {
    std::cerr << "geometry check failed: norden-sen "
              << report.norden_sen_residual << ", flatness "
              << report.flatness_residual << "\n";
    return 4;
  }
  return 0;
}

struct ReportArgs {
  std::uint64_t seed = 0;
  bool show_config = false;
  OutputFlags out;
};

Json config_document() {
  const SolveOptions solver;
  const bregman::LegendreOptions legendre;
  Json doc;
  doc["seed"] = 0;
  Json s;
  s["kkt_tol"] = solver.kkt_tol;
  s["constraint_tol"] = solver.constraint_tol;
  s["max_iterations"] = solver.max_iterations;
  s["boundary_fraction"] = solver.boundary_fraction;
  doc["solver"] = s;
  Json l;
  l["roundtrip_tol"] = legendre.roundtrip_tol;
  l["slope_threshold"] = legendre.slope_threshold;
  l["slope_growth"] = legendre.slope_growth;
  l["boundary_probes"] = legendre.boundary_probes;
  l["step_schedule"] = legendre.schedule;
  doc["legendre"] = l;
  Json g;
  g["fd_scale"] = bregman::kGeometryFdScale;
  g["degenerate_metric_floor"] = bregman::kDegenerateMetricFloor;
  g["flatness_budget"] = bregman::kFlatnessBudget;
  g["metric_vs_hessian_budget"] = bregman::kMetricHessianBudget;
  g["norden_sen_budget"] = bregman::kNordenSenBudget;
  g["orthogonality_budget"] = bregman::kOrthogonalityBudget;
  doc["geometry"] = g;
  Json c;
  c["pythagoras_affine_budget"] = bregman::kAffineSlackBudget;
  c["pythagoras_convex_floor"] = bregman::kConvexSlackFloor;
  doc["checks"] = c;
  Json sp;
  sp["zero_threshold"] = bregman::kSpectralThreshold;
  doc["spectral"] = sp;
  Json io_block;
  io_block["json_significant_digits"] = bregman::io::kJsonSignificantDigits;
  io_block["csv_significant_digits"] = bregman::io::kCsvSignificantDigits;
  doc["io"] = io_block;
  return doc;
}

int run_report(const ReportArgs& a) {
  if (a.show_config) {
    emit(config_document(), a.out);
    return 0;
  }
  const auto results = bregman::run_property_suite(a.seed);
  bool all = true;
  Json props = Json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    Json p;
    p["name"] = r.name;
    p["pass"] = r.pass;
    p["worst"] = r.worst;
    p["budget"] = r.budget;
    p["detail"] = r.detail;
    props.push_back(std::move(p));
  }
  Json doc;
  doc["seed"] = static_cast<std::int64_t>(a.seed);
  doc["all_pass"] = all;
  doc["properties"] = std::move(props);
  emit(doc, a.out, /*report_layout=*/true);
  if (!all) {
    for (const auto& r : results) {
      if (!r.pass) std::cerr << "property failed: " << r.name << " — " << r.detail << "\n";
    }
    return 4;
  }
  return 0;
}

void attach_solver_flags(CLI::App* cmd, SolveOptions* opts) {
  cmd->add_option("--kkt-tol", opts->kkt_tol, "stationarity tolerance");
  cmd->add_option("--constraint-tol", opts->constraint_tol,
                  "feasibility tolerance");
  cmd->add_option("--max-iterations", opts->max_iterations, "iteration cap");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brègman divergences, projections, and dually flat geometry"};
  app.require_subcommand(1);

  DivArgs div;
  auto* div_cmd = app.add_subcommand("div", "evaluate a divergence D(x, y)");
  div.pot.attach(div_cmd);
  div_cmd->add_option("--matrix-family", div.matrix_fam,
                      "matrix family (umegaki, logdet, fermi, gamma-norm, alpha)");
  div_cmd->add_option("--geometry", div.geometry,
                      "generalized geometry document, inline JSON or @file");
  div_cmd->add_option("--x", div.x, "first argument")->required();
  div_cmd->add_option("--y", div.y, "second argument")->required();
  div.out.attach(div_cmd);

  ProjectArgs project;
  auto* project_cmd =
      app.add_subcommand("project", "Brègman projection onto a constraint set");
  project.pot.attach(project_cmd);
  project_cmd->add_option("--side", project.side, "left or right");
  project_cmd->add_option("--constraint", project.constraint,
                          "simplex:<mass>, inline JSON, or @file")
      ->required();
  project_cmd->add_option("--y", project.y, "point to project")->required();
  project_cmd->add_flag("--trace", project.trace,
                        "record per-iteration residuals");
  attach_solver_flags(project_cmd, &project.opts);
  project.out.attach(project_cmd);

  ConjugateArgs conjugate;
  auto* conj_cmd = app.add_subcommand(
      "conjugate", "Fenchel conjugate value and gradient at a dual point");
  conjugate.pot.attach(conj_cmd);
  conj_cmd->add_option("--y", conjugate.y, "dual point")->required();
  conjugate.out.attach(conj_cmd);

  LegendreArgs legendre;
  auto* leg_cmd = app.add_subcommand(
      "check-legendre", "gradient round trip and boundary-slope probes");
  legendre.pot.attach(leg_cmd);
  leg_cmd->add_option("--dim", legendre.dim, "dimension of the sample space");
  leg_cmd->add_option("--samples", legendre.samples, "interior sample count");
  leg_cmd->add_option("--seed", legendre.seed, "sampling seed");
  legendre.out.attach(leg_cmd);

  PythagorasArgs pythagoras;
  auto* pyth_cmd = app.add_subcommand(
      "check-pythagoras", "generalized Pythagorean identity at a projection");
  pythagoras.pot.attach(pyth_cmd);
  pyth_cmd->add_option("--side", pythagoras.side, "left or right");
  pyth_cmd->add_option("--constraint", pythagoras.constraint,
                       "simplex:<mass>, inline JSON, or @file")
      ->required();
  pyth_cmd->add_option("--y", pythagoras.y, "point being projected")->required();
  pyth_cmd->add_option("--x", pythagoras.x, "feasible comparison point")
      ->required();
  pyth_cmd->add_flag("--trace", pythagoras.trace,
                     "record per-iteration residuals");
  attach_solver_flags(pyth_cmd, &pythagoras.opts);
  pythagoras.out.attach(pyth_cmd);

  GeometryArgs geometry;
  auto* geo_cmd = app.add_subcommand(
      "check-geometry", "metric, connections, and flatness at a point");
  geometry.pot.attach(geo_cmd);
  geo_cmd->add_option("--point", geometry.point, "chart point")->required();
  geo_cmd->add_option("--trials", geometry.trials,
                      "sampled triples for the compatibility residual");
  geometry.out.attach(geo_cmd);

  ReportArgs report;
  auto* report_cmd = app.add_subcommand(
      "report", "run the cross-module property suite (exit 4 on failure)");
  report_cmd->add_option("--seed", report.seed, "suite seed");
  report_cmd->add_flag("--show-config", report.show_config,
                       "print the centralized numeric defaults and exit");
  report.out.attach(report_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (div_cmd->parsed()) return run_div(div);
    if (project_cmd->parsed()) return run_project(project);
    if (conj_cmd->parsed()) return run_conjugate(conjugate);
    if (leg_cmd->parsed()) return run_check_legendre(legendre);
    if (pyth_cmd->parsed()) return run_check_pythagoras(pythagoras);
    if (geo_cmd->parsed()) return run_check_geometry(geometry);
    if (report_cmd->parsed()) return run_report(report);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const bregman::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << " (residual "
              << e.residual() << " after " << e.iterations() << " iterations)\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return 2;
  }
  return 2;  // unreachable: a subcommand is required
}
