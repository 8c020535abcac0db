#include "bregman/verify.hpp"

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bregman/constraints.hpp"
#include "bregman/divergence.hpp"
#include "bregman/embeddings.hpp"
#include "bregman/geometry.hpp"
#include "bregman/hermitian.hpp"
#include "bregman/io.hpp"
#include "bregman/orlicz.hpp"
#include "bregman/potentials.hpp"
#include "bregman/projection.hpp"
#include "bregman/rng.hpp"
#include "bregman/spectral.hpp"

namespace bregman {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Complex = std::complex<double>;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

/// One sub-check of a property: a residual held against a frozen budget.
struct Gate {
  std::string label;
  double value = 0.0;
  double budget = 0.0;
};

/// Collapses the gates into a PropertyResult: `worst`/`budget` report the
/// tightest sub-check, `detail` lists them all.
PropertyResult finish(std::string name, const std::vector<Gate>& gates,
                      const std::string& note = {}) {
  PropertyResult r;
  r.name = std::move(name);
  r.pass = true;
  double tightest = -std::numeric_limits<double>::infinity();
  std::string detail;
  for (const auto& g : gates) {
    if (!(g.value <= g.budget)) r.pass = false;
    const double margin =
        g.budget > 0.0 ? g.value / g.budget
                       : (g.value <= 0.0 ? 0.0
                                         : std::numeric_limits<double>::infinity());
    if (margin > tightest) {
      tightest = margin;
      r.worst = g.value;
      r.budget = g.budget;
    }
    if (!detail.empty()) detail += "; ";
    detail += g.label + " " + sci(g.value) + " vs " + sci(g.budget);
  }
  if (!note.empty()) detail += detail.empty() ? note : "; " + note;
  r.detail = std::move(detail);
  return r;
}

std::vector<std::array<double, 2>> phi_rows(double (*fn)(double), double t_max,
                                            int knots) {
  std::vector<std::array<double, 2>> rows;
  rows.reserve(knots + 1);
  for (int i = 0; i <= knots; ++i) {
    const double t = t_max * i / knots;
    rows.push_back({t, fn(t)});
  }
  return rows;
}

PotentialSpec cubic_norm_integral(Eigen::Index n) {
  return build_norm_integral_potential(
      phi_rows(+[](double t) { return t + 0.05 * t * t * t; }, 6.0, 200),
      NormKind::Euclidean, n);
}

struct FamilyCase {
  const char* label;
  PotentialSpec spec;
};

std::vector<FamilyCase> vector_roster(Eigen::Index n) {
  return {{"neg-entropy", PotentialSpec::neg_entropy(n)},
          {"burg", PotentialSpec::burg(n)},
          {"fermi-dirac", PotentialSpec::fermi_dirac(n)},
          {"gamma-norm(0.7)", PotentialSpec::gamma_norm(n, 0.7)},
          {"alpha-power(0.5)", PotentialSpec::alpha_power(n, 0.5)},
          {"norm-integral", cubic_norm_integral(n)}};
}

// ---- hermitian sampling -------------------------------------------------

template <typename Scalar>
using Mat = typename Hermitian<Scalar>::Matrix;

template <typename Scalar>
Scalar random_entry(Rng& rng);

template <>
double random_entry<double>(Rng& rng) {
  return rng.normal();
}

template <>
Complex random_entry<Complex>(Rng& rng) {
  const double re = rng.normal();
  const double im = rng.normal();
  return {re, im};
}

template <typename Scalar>
Mat<Scalar> random_square(Rng& rng, Eigen::Index n) {
  Mat<Scalar> m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = random_entry<Scalar>(rng);
  }
  return m;
}

template <typename Scalar>
Hermitian<Scalar> random_direction(Rng& rng, Eigen::Index n) {
  const Mat<Scalar> m = random_square<Scalar>(rng, n);
  Mat<Scalar> h = 0.5 * (m + m.adjoint());
  return Hermitian<Scalar>((h / h.norm()).eval());
}

template <typename Scalar>
Hermitian<Scalar> with_spectrum(Rng& rng, const VectorXd& lam) {
  Eigen::HouseholderQR<Mat<Scalar>> qr(random_square<Scalar>(rng, lam.size()));
  const Mat<Scalar> u = qr.householderQ();
  return Hermitian<Scalar>(
      (u * lam.cast<Scalar>().asDiagonal() * u.adjoint()).eval());
}

template <typename Scalar>
double commutator_norm(const Hermitian<Scalar>& a, const Hermitian<Scalar>& b) {
  return (a.matrix() * b.matrix() - b.matrix() * a.matrix())
      .cwiseAbs()
      .maxCoeff();
}

/// Pair with spectra in [lo, hi], separated in sup norm; optionally
/// non-commuting (for the closed-form/generic agreement checks).
template <typename Scalar>
std::pair<Hermitian<Scalar>, Hermitian<Scalar>> spectral_pair(
    Rng& rng, Eigen::Index n, double lo, double hi, bool noncommuting) {
  for (;;) {
    auto a = with_spectrum<Scalar>(rng, rng.uniform_vector(n, lo, hi));
    auto b = with_spectrum<Scalar>(rng, rng.uniform_vector(n, lo, hi));
    if ((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() <= 1e-3) continue;
    if (noncommuting && n > 1 && commutator_norm(a, b) <= 1e-8) continue;
    return {std::move(a), std::move(b)};
  }
}

struct MatrixCase {
  const char* label;
  MatrixDivSpec fam;
  PotentialSpec (*vec)(Eigen::Index);
  double lo, hi;
};

std::vector<MatrixCase> matrix_roster() {
  return {
      {"umegaki", MatrixDivSpec::umegaki(),
       +[](Eigen::Index n) { return PotentialSpec::neg_entropy(n); }, 0.2, 3.0},
      {"logdet", MatrixDivSpec::logdet(),
       +[](Eigen::Index n) { return PotentialSpec::burg(n); }, 0.2, 3.0},
      {"fermi", MatrixDivSpec::fermi(),
       +[](Eigen::Index n) { return PotentialSpec::fermi_dirac(n); }, 0.08,
       0.92},
      {"gamma-norm(0.5)", MatrixDivSpec::gamma_norm(0.5),
       +[](Eigen::Index n) { return PotentialSpec::gamma_norm(n, 0.5); }, 0.2,
       3.0},
      {"alpha(0.5)", MatrixDivSpec::alpha_power(0.5),
       +[](Eigen::Index n) { return PotentialSpec::alpha_power(n, 0.5); }, 0.2,
       3.0}};
}

/// The misprintable variant of the Umegaki closed form with both trace terms
/// negated; kept here so the suite can prove it would be caught.
double umegaki_both_minus(const Hermitian<double>& xi,
                          const Hermitian<double>& zeta) {
  const auto exi = eigen_nonincreasing(xi);
  const auto eze = eigen_nonincreasing(zeta);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < exi.eigenvalues.size(); ++i) {
    entropy += exi.eigenvalues[i] * std::log(exi.eigenvalues[i]);
  }
  const MatrixXd log_ze =
      eze.vectors * eze.eigenvalues.array().log().matrix().asDiagonal() *
      eze.vectors.adjoint();
  return entropy - (xi.matrix() * log_ze).trace() - exi.eigenvalues.sum() -
         eze.eigenvalues.sum();
}

VectorXd separated_sample(const PotentialSpec& spec, Rng& rng,
                          const VectorXd& from) {
  for (;;) {
    VectorXd y = sample_interior(spec, rng);
    if ((y - from).lpNorm<Eigen::Infinity>() > 1e-3) return y;
  }
}

// ---- the ten properties -------------------------------------------------

PropertyResult information_axiom(std::uint64_t seed) {
  double negativity = 0.0;       // most negative divergence seen
  double coincident = 0.0;       // largest D(x, x)
  double min_distinct = std::numeric_limits<double>::infinity();
  Rng rng(seed + 1);
  for (const Eigen::Index n : {1, 2, 5}) {
    for (const auto& fc : vector_roster(n)) {
      for (int k = 0; k < 1000; ++k) {
        const VectorXd x = sample_interior(fc.spec, rng);
        if (k % 10 == 0) {
          coincident = std::max(coincident, bregman_div(fc.spec, x, x).value());
          continue;
        }
        const VectorXd y = separated_sample(fc.spec, rng, x);
        const double d = bregman_div(fc.spec, x, y).value();
        negativity = std::min(negativity, d);
        min_distinct = std::min(min_distinct, d);
      }
    }
  }
  for (const auto& mc : matrix_roster()) {
    for (int k = 0; k < 1000; ++k) {
      const Eigen::Index n = 2 + k % 5;
      const auto [a, b] = spectral_pair<double>(rng, n, mc.lo, mc.hi, false);
      if (k % 10 == 0) {
        coincident = std::max(coincident, matrix_div(mc.fam, a, a).value());
        continue;
      }
      const double d = matrix_div(mc.fam, a, b).value();
      negativity = std::min(negativity, d);
      min_distinct = std::min(min_distinct, d);
    }
  }
  return finish(
      "information-axiom",
      {{"negativity", -negativity, 1e-12},
       {"coincident-pairs", coincident, 1e-10},
       {"distinct-pair-floor", min_distinct > 1e-10 ? 0.0 : 1.0, 0.0}},
      "min distinct D " + sci(min_distinct) +
          "; 6 vector families x n in {1,2,5} and 5 matrix families x n in "
          "{2..6}, 1000 pairs each");
}

PropertyResult legendre_duality(std::uint64_t seed) {
  double roundtrip = 0.0;
  double floor_breach = 0.0;  // most negative Fenchel-Young gap
  double equality = 0.0;      // |gap| at y = grad(x)
  bool reports_pass = true;
  Rng rng(seed + 2);
  for (const auto& fc : vector_roster(3)) {
    const auto report = check_euler_legendre(fc.spec, 1000, seed + 2);
    roundtrip = std::max(roundtrip, report.roundtrip_residual);
    reports_pass = reports_pass && report.pass;
    for (int k = 0; k < 200; ++k) {
      const VectorXd x = sample_interior(fc.spec, rng);
      const VectorXd z = sample_interior(fc.spec, rng);
      const VectorXd y = grad_potential(fc.spec, z);
      const double gap = eval_potential(fc.spec, x).value() +
                         fenchel_conjugate(fc.spec, y).value() - x.dot(y);
      floor_breach = std::min(floor_breach, gap);
      const VectorXd yx = grad_potential(fc.spec, x);
      const double at_grad = eval_potential(fc.spec, x).value() +
                             fenchel_conjugate(fc.spec, yx).value() -
                             x.dot(yx);
      equality = std::max(equality, std::abs(at_grad));
    }
  }
  return finish("legendre-duality",
                {{"gradient-roundtrip", roundtrip, 1e-8},
                 {"fenchel-young-floor", -floor_breach, 1e-10},
                 {"fenchel-young-equality", equality, 1e-8},
                 {"boundary-probes", reports_pass ? 0.0 : 1.0, 0.0}},
                "1000 interior samples per family at n=3, 200 gap pairs");
}

PropertyResult spectral_closed_forms(std::uint64_t seed) {
  double worst = 0.0;
  Rng rng(seed + 3);
  for (const auto& mc : matrix_roster()) {
    for (int k = 0; k < 200; ++k) {
      const Eigen::Index n = 2 + k % 5;
      const auto [a, b] = spectral_pair<double>(rng, n, mc.lo, mc.hi, true);
      const double closed = matrix_div(mc.fam, a, b).value();
      const double generic = matrix_div_generic(mc.vec(n), a, b).value();
      worst = std::max(worst,
                       std::abs(closed - generic) / (1.0 + std::abs(generic)));
    }
  }
  // A sign slip on the Umegaki trace terms must not survive this gate: the
  // corrupted form has to disagree with the generic construction.
  const auto [a, b] = spectral_pair<double>(rng, 4, 0.2, 3.0, true);
  const double generic =
      matrix_div_generic(PotentialSpec::neg_entropy(4), a, b).value();
  const double corrupted = umegaki_both_minus(a, b);
  const double drift =
      std::abs(corrupted - generic) / (1.0 + std::abs(generic));
  return finish("spectral-closed-forms",
                {{"closed-vs-generic", worst, 1e-8},
                 {"sign-guard", drift > 1e-8 ? 0.0 : 1.0, 0.0}},
                "200 non-commuting pairs per family, n in {2..6}; corrupted "
                "trace sign drifts by " +
                    sci(drift));
}

template <typename Scalar>
double gradient_fd_worst(const PotentialSpec& spec, Rng& rng, Eigen::Index n,
                         double lo, double hi, int points) {
  const double h = 1e-5;
  double worst = 0.0;
  for (int p = 0; p < points; ++p) {
    const auto x = with_spectrum<Scalar>(rng, rng.uniform_vector(n, lo, hi));
    const auto grad = spectral_grad(spec, x);
    for (int d = 0; d < 20; ++d) {
      const auto v = random_direction<Scalar>(rng, n);
      const Hermitian<Scalar> xp((x.matrix() + h * v.matrix()).eval());
      const Hermitian<Scalar> xm((x.matrix() - h * v.matrix()).eval());
      const double fd = (spectral_potential_eval(spec, xp).value() -
                         spectral_potential_eval(spec, xm).value()) /
                        (2.0 * h);
      const double exact =
          (grad.matrix() * v.matrix()).real().trace();
      worst = std::max(worst, std::abs(fd - exact) / (1.0 + std::abs(exact)));
    }
  }
  return worst;
}

PropertyResult spectral_gradient(std::uint64_t seed) {
  double worst = 0.0;
  Rng rng(seed + 4);
  for (const auto& mc : matrix_roster()) {
    for (const Eigen::Index n : {2, 3, 4, 5, 6}) {
      worst = std::max(worst, gradient_fd_worst<double>(mc.vec(n), rng, n,
                                                        mc.lo, mc.hi, 5));
      worst = std::max(worst, gradient_fd_worst<Complex>(mc.vec(n), rng, n,
                                                         mc.lo, mc.hi, 5));
    }
  }
  return finish("spectral-gradient", {{"fd-agreement", worst, 1e-5}},
                "central differences at step 1e-5, 50 points x 20 directions "
                "per family, real and complex");
}

PropertyResult pythagorean_inequality(std::uint64_t seed) {
  double affine_worst = 0.0;
  double convex_breach = 0.0;  // most negative box slack
  Rng rng(seed + 5);
  const Eigen::Index n = 3;
  for (const auto& fc : vector_roster(n)) {
    for (int k = 0; k < 100; ++k) {
      const VectorXd center = sample_interior(fc.spec, rng);
      MatrixXd a(1, n);
      for (Eigen::Index j = 0; j < n; ++j) a(0, j) = rng.normal();
      const auto slice = ConstraintSet::affine(a, a * center);
      const VectorXd y = sample_interior(fc.spec, rng);
      const auto rep = pythagoras_check(fc.spec, slice, y, center, Side::Left);
      affine_worst = std::max(affine_worst, std::abs(rep.slack));
    }
    for (int k = 0; k < 100; ++k) {
      const VectorXd p = sample_interior(fc.spec, rng);
      const VectorXd q = sample_interior(fc.spec, rng);
      const VectorXd lo = p.cwiseMin(q);
      const VectorXd hi = (p.cwiseMax(q).array() + 1e-3).matrix();
      const auto box = ConstraintSet::box(lo, hi);
      const VectorXd x = 0.5 * (lo + hi);
      const VectorXd y = sample_interior(fc.spec, rng);
      const auto rep = pythagoras_check(fc.spec, box, y, x, Side::Left);
      convex_breach = std::min(convex_breach, rep.slack);
    }
  }
  return finish("pythagorean-inequality",
                {{"affine-slack", affine_worst, kAffineSlackBudget},
                 {"convex-slack-floor", -convex_breach, kConvexSlackFloor}},
                "100 affine and 100 box instances per family, n=3");
}

PropertyResult entropy_projection_formula(std::uint64_t seed) {
  double worst = 0.0;
  Rng rng(seed + 6);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = std::array<Eigen::Index, 3>{2, 3, 5}[k % 3];
    const auto spec = PotentialSpec::neg_entropy(n);
    const VectorXd y = sample_interior(spec, rng);
    const double s = rng.uniform(0.5, 3.0);
    const auto set =
        ConstraintSet::affine(MatrixXd::Ones(1, n), VectorXd::Constant(1, s));
    const VectorXd got = left_project(spec, set, y).point;
    const VectorXd expected = y * (s / y.sum());
    worst = std::max(worst, (got - expected).lpNorm<Eigen::Infinity>());
  }
  return finish("entropy-projection-formula",
                {{"scaled-copy-distance", worst, 1e-8}},
                "100 mass-constraint instances, n in {2,3,5}");
}

PropertyResult embedding_pullbacks(std::uint64_t seed) {
  double worst = 0.0;
  double jordan_worst = 0.0;
  Rng rng(seed + 7);
  const auto rel = [](double a, double b) {
    return std::abs(a - b) / (1.0 + std::abs(b));
  };

  const std::array<std::array<double, 3>, 3> triples{
      {{1.0, 0.5, 0.5}, {0.3, 0.25, 0.6}, {2.0, 0.75, 1.0 / 3.0}}};
  for (const auto& [al, be, ga] : triples) {
    const auto g = GeneralizedGeometry::mazur(al, be, ga, CarrierKind::Vector, 3);
    for (int k = 0; k < 200; ++k) {
      VectorXd a = rng.uniform_vector(3, 0.0, 3.0);
      const VectorXd b = rng.uniform_vector(3, 0.01, 3.0);
      if (k % 3 == 0) a[0] = 0.0;  // cone boundary stays admissible
      worst = std::max(worst, rel(pullback_div(g, a, b).value(),
                                  d_mazur(al, be, ga, a, b).value()));
    }
  }

  const auto gm = GeneralizedGeometry::mazur(0.8, 0.4, 0.5, CarrierKind::Matrix, 3);
  const auto gm2 = GeneralizedGeometry::mazur(0.8, 0.4, 0.5, CarrierKind::Matrix, 2);
  for (int k = 0; k < 200; ++k) {
    const auto [a, b] = spectral_pair<double>(rng, 3, 0.05, 2.5, false);
    worst = std::max(worst, rel(pullback_div(gm, a, b).value(),
                                d_mazur(0.8, 0.4, 0.5, a, b).value()));
    const auto [ac, bc] = spectral_pair<Complex>(rng, 2, 0.05, 2.5, false);
    worst = std::max(worst, rel(pullback_div(gm2, ac, bc).value(),
                                d_mazur(0.8, 0.4, 0.5, ac, bc).value()));
    const auto [ja, jb] = spectral_pair<double>(rng, 3, 0.02, 2.0, false);
    jordan_worst = std::max(
        jordan_worst, std::abs(d_jordan(1.3, 0.6, 0.35, ja, jb).value() -
                               d_mazur(1.3, 0.6, 0.35, ja, jb).value()));
  }

  const OrliczFunction sq = OrliczFunction::from_table(
      phi_rows(+[](double t) { return t * t; }, 2.0, 512));
  VectorXd mu(2);
  mu << 1.0, 3.0;
  const auto go = GeneralizedGeometry::orlicz(sq, mu, 0.5);
  for (int k = 0; k < 200; ++k) {
    VectorXd w = rng.uniform_vector(2, 0.02, 1.0);
    VectorXd r = rng.uniform_vector(2, 0.02, 1.0);
    w /= mu.dot(w);
    r /= mu.dot(r);
    worst = std::max(worst, rel(pullback_div(go, w, r).value(),
                                d_orlicz_discrete(sq, 0.5, mu, w, r).value()));
  }

  const auto gs = GeneralizedGeometry::spin_factor(build_norm_integral_potential(
      phi_rows(+[](double t) { return t; }, 4.0, 200), NormKind::Euclidean, 2));
  for (int k = 0; k < 200; ++k) {
    VectorXd x = rng.uniform_vector(2, -0.7, 0.7);
    VectorXd y = rng.uniform_vector(2, -0.7, 0.7);
    const SpinFactorElement v{1.0, x}, w{1.0, y};
    worst = std::max(worst, rel(pullback_div(gs, v, w).value(),
                                spin_factor_div(gs, v, w).value()));
    worst = std::max(worst, rel(pullback_div(gs, v, w).value(),
                                0.5 * (x - y).squaredNorm()));
  }

  return finish("embedding-pullbacks",
                {{"closed-vs-pullback", worst, 1e-8},
                 {"jordan-vs-mazur", jordan_worst, 1e-12}},
                "200 pairs per carrier: mazur vector/real/complex, orlicz "
                "densities, spin slices");
}

PropertyResult dually_flat_geometry(std::uint64_t seed) {
  double flatness = 0.0;
  double metric_vs_hess = 0.0;
  double norden_sen = 0.0;
  double orthogonality = 0.0;
  Rng rng(seed + 8);

  struct GeometryCase {
    const char* label;
    PotentialSpec spec;
    double lo, hi;
  };
  const std::vector<GeometryCase> cases{
      {"neg-entropy", PotentialSpec::neg_entropy(2), 0.12, 0.92},
      {"burg", PotentialSpec::burg(2), 0.5, 2.0},
      {"gamma-norm(0.7)", PotentialSpec::gamma_norm(2, 0.7), 0.35, 1.3}};

  for (const auto& gc : cases) {
    const DivergenceField field = bregman_field(gc.spec);
    std::vector<VectorXd> pts;
    for (int k = 0; k < 4; ++k) pts.push_back(rng.uniform_vector(2, gc.lo, gc.hi));
    const FlatnessReport rep = flatness_check(gc.spec, pts);
    flatness = std::max({flatness, rep.theta_residual, rep.eta_residual});
    for (const auto& p : pts) {
      const MatrixXd diff =
          metric_from_divergence(field, p) - hess_potential(gc.spec, p);
      metric_vs_hess = std::max(metric_vs_hess, diff.cwiseAbs().maxCoeff());
    }
    norden_sen = std::max(norden_sen, norden_sen_check(field, pts[0], 6));
    norden_sen = std::max(norden_sen, norden_sen_check(field, pts[1], 6));
    for (int k = 0; k < 8; ++k) {
      const VectorXd center = rng.uniform_vector(2, gc.lo, gc.hi);
      MatrixXd a(1, 2);
      a << rng.normal(), rng.normal();
      const auto slice = ConstraintSet::affine(a, a * center);
      const VectorXd y = rng.uniform_vector(2, gc.lo, gc.hi);
      orthogonality =
          std::max(orthogonality, orthogonality_check(gc.spec, slice, y));
    }
  }

  const PotentialChart chart = sum_exp_chart(2);
  const DivergenceField exp_field = bregman_field(chart);
  std::vector<VectorXd> pts;
  for (int k = 0; k < 4; ++k) pts.push_back(rng.uniform_vector(2, -0.8, 0.8));
  const FlatnessReport rep = flatness_check(chart, pts);
  flatness = std::max({flatness, rep.theta_residual, rep.eta_residual});
  for (const auto& p : pts) {
    const MatrixXd hess = p.array().exp().matrix().asDiagonal();
    const MatrixXd diff = metric_from_divergence(exp_field, p) - hess;
    metric_vs_hess = std::max(metric_vs_hess, diff.cwiseAbs().maxCoeff());
  }
  norden_sen = std::max(norden_sen, norden_sen_check(exp_field, pts[0], 6));

  return finish("dually-flat-geometry",
                {{"flatness", flatness, kFlatnessBudget},
                 {"metric-vs-hessian", metric_vs_hess, kMetricHessianBudget},
                 {"norden-sen", norden_sen, kNordenSenBudget},
                 {"projection-orthogonality", orthogonality, kOrthogonalityBudget}},
                "seeded grids for neg-entropy, burg, gamma-norm(0.7), sum-exp");
}

PropertyResult grid_bracketed_projection(std::uint64_t seed) {
  double worst = -std::numeric_limits<double>::infinity();
  Rng rng(seed + 9);

  struct BoxCase {
    const char* label;
    PotentialSpec spec;
    double lo, hi;
  };
  const std::vector<BoxCase> cases{
      {"neg-entropy", PotentialSpec::neg_entropy(2), 0.15, 2.0},
      {"burg", PotentialSpec::burg(2), 0.3, 2.5},
      {"fermi-dirac", PotentialSpec::fermi_dirac(2), 0.08, 0.92},
      {"gamma-norm(0.7)", PotentialSpec::gamma_norm(2, 0.7), 0.3, 1.6},
      {"alpha-power(0.5)", PotentialSpec::alpha_power(2, 0.5), 0.1, 2.0},
      {"norm-integral", cubic_norm_integral(2), 0.2, 1.5}};

  for (const auto& bc : cases) {
    const VectorXd y = sample_interior(bc.spec, rng);
    const auto box = ConstraintSet::box(VectorXd::Constant(2, bc.lo),
                                        VectorXd::Constant(2, bc.hi));
    for (const Side side : {Side::Left, Side::Right}) {
      double grid_min = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 100; ++i) {
        for (int j = 0; j < 100; ++j) {
          VectorXd g(2);
          g << bc.lo + (bc.hi - bc.lo) * i / 99.0,
              bc.lo + (bc.hi - bc.lo) * j / 99.0;
          const double d = side == Side::Left
                               ? bregman_div(bc.spec, g, y).value()
                               : bregman_div(bc.spec, y, g).value();
          grid_min = std::min(grid_min, d);
        }
      }
      const auto res = side == Side::Left ? left_project(bc.spec, box, y)
                                          : right_project(bc.spec, box, y);
      worst = std::max(worst, res.value - grid_min);
    }
  }
  return finish("grid-bracketed-projection",
                {{"solver-vs-grid", worst, 1e-4}},
                "10^4-point grids, both sides, six families at n=2");
}

PropertyResult serialization_determinism(std::uint64_t seed) {
  int mismatches = 0;
  int documents = 0;
  const auto roundtrip = [&](const io::Json& doc,
                             io::Json (*rebuild)(const io::Json&)) {
    ++documents;
    const std::string first = io::write(doc);
    const io::Json back = io::parse(first);
    if (io::write(rebuild ? rebuild(back) : back) != first) ++mismatches;
  };

  for (const auto& fc : vector_roster(3)) {
    roundtrip(io::potential_to_json(fc.spec), +[](const io::Json& j) {
      return io::potential_to_json(io::potential_from_json(j));
    });
  }

  VectorXd y(2);
  y << 1.0, 3.0;
  SolveOptions opts;
  opts.keep_trace = true;
  const auto proj = left_project(PotentialSpec::neg_entropy(2),
                                 ConstraintSet::simplex(1.0, 2), y, opts);
  roundtrip(io::projection_to_json(proj, true), +[](const io::Json& j) {
    return io::projection_to_json(io::projection_from_json(j), true);
  });
  const auto pyth = pythagoras_check(PotentialSpec::neg_entropy(2),
                                     ConstraintSet::simplex(1.0, 2), y,
                                     0.5 * VectorXd::Ones(2), Side::Left);
  roundtrip(io::pythagoras_to_json(pyth, false), +[](const io::Json& j) {
    return io::pythagoras_to_json(io::pythagoras_from_json(j), false);
  });

  const auto legendre =
      check_euler_legendre(PotentialSpec::burg(2), 50, seed + 10);
  roundtrip(io::legendre_to_json(legendre), +[](const io::Json& j) {
    return io::legendre_to_json(io::legendre_from_json(j));
  });

  VectorXd p(2);
  p << 0.5, 0.8;
  const auto geo = geometry_report(PotentialSpec::neg_entropy(2), p, 4);
  roundtrip(io::geometry_report_to_json(geo), +[](const io::Json& j) {
    return io::geometry_report_to_json(io::geometry_report_from_json(j));
  });

  roundtrip(io::constraint_to_json(ConstraintSet::simplex(1.0, 3)),
            +[](const io::Json& j) {
              return io::constraint_to_json(io::constraint_from_json(j));
            });
  roundtrip(io::constraint_to_json(ConstraintSet::box(VectorXd::Zero(2),
                                                      VectorXd::Ones(2))),
            +[](const io::Json& j) {
              return io::constraint_to_json(io::constraint_from_json(j));
            });

  const auto gm = GeneralizedGeometry::mazur(0.8, 0.4, 0.5, CarrierKind::Vector, 3);
  roundtrip(io::generalized_to_json(gm), +[](const io::Json& j) {
    return io::generalized_to_json(io::generalized_from_json(j));
  });

  io::Json stress;
  stress["third"] = 1.0 / 3.0;
  stress["tiny"] = 1e-13;
  stress["negative-zero-free"] = 0.0;
  roundtrip(stress, nullptr);

  return finish("serialization-determinism",
                {{"write-parse-write-mismatches",
                  static_cast<double>(mismatches), 0.0}},
                std::to_string(documents) + " documents, byte-compared");
}

}  // namespace

std::vector<PropertyResult> run_property_suite(std::uint64_t seed) {
  return {information_axiom(seed),      legendre_duality(seed),
          spectral_closed_forms(seed),  spectral_gradient(seed),
          pythagorean_inequality(seed), entropy_projection_formula(seed),
          embedding_pullbacks(seed),    dually_flat_geometry(seed),
          grid_bracketed_projection(seed), serialization_determinism(seed)};
}

}  // namespace bregman
