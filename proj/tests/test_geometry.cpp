#include <Eigen/Core>

#include <cmath>
#include <vector>

#include "bregman/constraints.hpp"
#include "bregman/divergence.hpp"
#include "bregman/errors.hpp"
#include "bregman/geometry.hpp"
#include "bregman/potentials.hpp"
#include "bregman/projection.hpp"
#include "bregman/rng.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bregman;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

VectorXd vec1(double a) {
  VectorXd v(1);
  v << a;
  return v;
}

// Half squared distance coded directly; near the diagonal this evaluates
// without any O(1) cancellation, unlike the same field assembled from a
// quadratic potential, so it probes the sharpest finite-difference floors.
DivergenceField direct_quadratic(Eigen::Index n) {
  return DivergenceField(
      [](const VectorXd& u, const VectorXd& v) {
        return 0.5 * (u - v).squaredNorm();
      },
      n);
}

ConstraintSet mass_slice(double total) {
  MatrixXd a(1, 2);
  a << 1.0, 1.0;
  VectorXd b(1);
  b << total;
  return ConstraintSet::affine(a, b);
}

}  // namespace

TEST_CASE("divergence fields validate their construction and diagonal") {
  const DivergenceField quad = direct_quadratic(2);
  CHECK(quad.dim() == 2);
  CHECK(quad.smoothness_order() == 3);
  CHECK(quad(vec2(1.0, 2.0), vec2(0.0, 2.0)) == doctest::Approx(0.5));

  const DivergenceField swapped = quad.swapped();
  CHECK(swapped(vec2(0.3, 0.1), vec2(1.3, 0.1)) ==
        quad(vec2(1.3, 0.1), vec2(0.3, 0.1)));

  CHECK(quad.diagonal_residual(vec2(0.4, -0.7)) == 0.0);
  CHECK(bregman_field(PotentialSpec::neg_entropy(2))
            .diagonal_residual(vec2(0.7, 1.3)) <= 1e-6);
  CHECK(bregman_field(sum_exp_chart(2)).diagonal_residual(vec2(0.2, -0.1)) <=
        1e-6);
  Rng rng(3);
  for (int t = 0; t < 3; ++t) {
    CHECK(bregman_field(PotentialSpec::burg(2))
              .diagonal_residual(rng.uniform_vector(2, 0.4, 2.0)) <= 1e-6);
    CHECK(bregman_field(PotentialSpec::fermi_dirac(2))
              .diagonal_residual(rng.uniform_vector(2, 0.2, 0.8)) <= 1e-6);
    CHECK(bregman_field(PotentialSpec::alpha_power(2, 0.5))
              .diagonal_residual(rng.uniform_vector(2, 0.3, 2.0)) <= 1e-6);
  }

  // a tilted square distance is not a divergence: its first derivative
  // survives on the diagonal and the residual says so loudly
  const DivergenceField tilted(
      [](const VectorXd& u, const VectorXd& v) {
        return 0.5 * (u - v).squaredNorm() + (u - v).sum();
      },
      2);
  CHECK(tilted.diagonal_residual(vec2(0.3, 0.4)) > 1e-2);

  CHECK_THROWS_AS((DivergenceField(DivergenceField::Fn{}, 2)),
                  ValidationError);
  CHECK_THROWS_AS(direct_quadratic(0), ValidationError);
  CHECK_THROWS_AS((DivergenceField(
                      [](const VectorXd&, const VectorXd&) { return 0.0; }, 2,
                      2)),
                  ValidationError);
  CHECK_THROWS_AS(quad(vec2(0.0, 0.0), vec1(0.0)), ValidationError);
  CHECK_THROWS_AS(quad.diagonal_residual(vec1(0.0)), ValidationError);
}

TEST_CASE("the induced metric reproduces the pinned examples") {
  const MatrixXd gq = metric_from_divergence(direct_quadratic(2),
                                             vec2(0.4, -0.7));
  CHECK((gq - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-10);

  const MatrixXd gq2 = metric_from_divergence(
      bregman_field(PotentialSpec::gamma_norm(2, 0.5)), vec2(0.3, -1.2));
  CHECK((gq2 - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-6);

  const MatrixXd gne = metric_from_divergence(
      bregman_field(PotentialSpec::neg_entropy(1)), vec1(0.5));
  CHECK(gne(0, 0) == doctest::Approx(2.0).epsilon(1e-6));
  const MatrixXd gbu =
      metric_from_divergence(bregman_field(PotentialSpec::burg(1)), vec1(2.0));
  CHECK(gbu(0, 0) == doctest::Approx(0.25).epsilon(1e-6));

  SUBCASE("the metric agrees with the potential hessian across families") {
    const PotentialSpec lin = build_norm_integral_potential(
        testsupport::linear_phi_table(), NormKind::Euclidean, 2);
    const PotentialSpec cub = build_norm_integral_potential(
        testsupport::cubic_phi_table(), NormKind::Euclidean, 2);
    struct Probe {
      PotentialSpec spec;
      double lo, hi;
    };
    const std::vector<Probe> probes = {
        {PotentialSpec::neg_entropy(2), 0.2, 2.0},
        {PotentialSpec::burg(2), 0.3, 2.0},
        {PotentialSpec::fermi_dirac(2), 0.2, 0.8},
        {PotentialSpec::gamma_norm(2, 0.5), 0.3, 1.5},
        {PotentialSpec::gamma_norm(2, 0.7), 0.3, 1.5},
        {PotentialSpec::alpha_power(2, 0.5), 0.3, 2.0},
        {lin, 0.4, 1.6},
        {cub, 0.4, 1.6},
    };
    Rng rng(5);
    for (const Probe& probe : probes) {
      const DivergenceField d = bregman_field(probe.spec);
      for (int t = 0; t < 3; ++t) {
        const VectorXd p = rng.uniform_vector(2, probe.lo, probe.hi);
        const MatrixXd g = metric_from_divergence(d, p);
        CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((g - hess_potential(probe.spec, p)).cwiseAbs().maxCoeff() <=
              1e-4);
      }
    }
  }

  SUBCASE("degenerate metrics raise instead of being regularized") {
    // depends on the first coordinate only: one flat direction
    const DivergenceField flat(
        [](const VectorXd& u, const VectorXd& v) {
          const double d0 = u[0] - v[0];
          return 0.5 * d0 * d0;
        },
        2);
    CHECK_THROWS_AS(metric_from_divergence(flat, vec2(0.0, 0.0)), DomainError);
    CHECK_THROWS_AS(metric_from_divergence(flat, vec1(0.0)), ValidationError);
  }
}

TEST_CASE("connection pairs vanish for flat fields and exchange under swap") {
  const auto [gq, gqd] = connections_from_divergence(direct_quadratic(2),
                                                     vec2(0.4, -0.7));
  CHECK(gq.max_abs() <= 1e-8);
  CHECK(gqd.max_abs() <= 1e-8);

  SUBCASE("the exponential-family witness has the textbook dual connection") {
    const VectorXd theta = vec2(0.1, -0.3);
    const auto [gamma, gamma_dual] =
        connections_from_divergence(bregman_field(sum_exp_chart(2)), theta);
    CHECK(gamma.max_abs() <= 1e-3);
    for (Eigen::Index i = 0; i < 2; ++i)
      for (Eigen::Index j = 0; j < 2; ++j)
        for (Eigen::Index k = 0; k < 2; ++k) {
          const double want =
              (i == j && j == k) ? std::exp(theta[i]) : 0.0;
          CHECK(std::abs(gamma_dual(i, j, k) - want) <= 1e-3);
        }
  }

  SUBCASE("swapping the arguments exchanges the pair exactly") {
    const DivergenceField d = bregman_field(PotentialSpec::neg_entropy(2));
    const VectorXd p = vec2(0.6, 1.1);
    const auto [gamma, gamma_dual] = connections_from_divergence(d, p);
    const auto [sgamma, sgamma_dual] =
        connections_from_divergence(d.swapped(), p);
    for (Eigen::Index i = 0; i < 2; ++i)
      for (Eigen::Index j = 0; j < 2; ++j)
        for (Eigen::Index k = 0; k < 2; ++k) {
          CHECK(sgamma(i, j, k) == gamma_dual(i, j, k));
          CHECK(sgamma_dual(i, j, k) == gamma(i, j, k));
          // torsion-freeness is structural, not a tolerance statement
          CHECK(gamma(i, j, k) == gamma(j, i, k));
          CHECK(gamma_dual(i, j, k) == gamma_dual(j, i, k));
        }
  }
}

TEST_CASE("norden-sen compatibility holds across the families") {
  CHECK(norden_sen_check(direct_quadratic(2), vec2(0.4, -0.7), 16) <= 1e-8);

  const PotentialSpec cub = build_norm_integral_potential(
      testsupport::cubic_phi_table(), NormKind::Euclidean, 2);
  CHECK(norden_sen_check(bregman_field(PotentialSpec::neg_entropy(2)),
                         vec2(0.5, 0.3), 16) <= 5e-3);
  CHECK(norden_sen_check(bregman_field(PotentialSpec::burg(2)),
                         vec2(1.0, 1.0), 16) <= 5e-3);
  CHECK(norden_sen_check(bregman_field(PotentialSpec::fermi_dirac(2)),
                         vec2(0.4, 0.6), 16) <= 5e-3);
  CHECK(norden_sen_check(bregman_field(PotentialSpec::alpha_power(2, 0.5)),
                         vec2(0.8, 1.4), 16) <= 5e-3);
  CHECK(norden_sen_check(bregman_field(PotentialSpec::gamma_norm(2, 0.7)),
                         vec2(0.6, 1.1), 16) <= 5e-3);
  CHECK(norden_sen_check(bregman_field(cub), vec2(0.9, 0.6), 16) <= 5e-3);
  CHECK(norden_sen_check(bregman_field(sum_exp_chart(2)), vec2(0.1, -0.4),
                         16) <= 5e-3);

  CHECK_THROWS_AS(norden_sen_check(direct_quadratic(2), vec2(0.0, 0.0), 0),
                  ValidationError);
}

TEST_CASE("dual coordinates match the closed forms and round-trip") {
  const VectorXd theta = vec2(0.7, 1.3);
  const VectorXd eta =
      dual_coordinates(PotentialSpec::gamma_norm(2, 0.5), theta);
  CHECK((eta - theta).cwiseAbs().maxCoeff() <= 1e-12);  // self-dual chart

  CHECK(std::abs(dual_coordinates(PotentialSpec::neg_entropy(1),
                                  vec1(1.0))[0]) <= 1e-12);
  const VectorXd ones =
      dual_coordinates(sum_exp_chart(2), VectorXd::Zero(2));
  CHECK((ones - VectorXd::Ones(2)).cwiseAbs().maxCoeff() <= 1e-12);

  SUBCASE("round trips hold on every family patch") {
    Rng rng(9);
    for (int t = 0; t < 5; ++t) {
      CHECK(dual_coordinates(PotentialSpec::neg_entropy(3),
                             rng.uniform_vector(3, 0.2, 2.0))
                .size() == 3);
      CHECK(dual_coordinates(PotentialSpec::burg(3),
                             rng.uniform_vector(3, 0.3, 2.0))
                .size() == 3);
      CHECK(dual_coordinates(PotentialSpec::fermi_dirac(3),
                             rng.uniform_vector(3, 0.2, 0.8))
                .size() == 3);
      CHECK(dual_coordinates(PotentialSpec::alpha_power(3, 0.5),
                             rng.uniform_vector(3, 0.3, 2.0))
                .size() == 3);
    }
  }

  SUBCASE("leaving the patch is a domain error, not a round-trip failure") {
    CHECK_THROWS_AS(
        dual_coordinates(PotentialSpec::neg_entropy(2), vec2(-1.0, 0.5)),
        DomainError);
    CHECK_THROWS_AS(dual_coordinates(PotentialSpec::burg(2), vec2(0.0, 1.0)),
                    DomainError);
    CHECK_THROWS_AS(
        dual_coordinates(PotentialSpec::neg_entropy(2), vec1(0.5)),
        ValidationError);
    CHECK_THROWS_AS(sum_exp_chart(0), ValidationError);
  }
}

TEST_CASE("bregman fields are dually flat in their paired charts") {
  const FlatnessReport quad = flatness_check(
      PotentialSpec::gamma_norm(2, 0.5), {vec2(0.3, -0.8), vec2(1.1, 0.2)});
  CHECK(quad.theta_residual <= 1e-7);
  CHECK(quad.eta_residual <= 1e-7);

  std::vector<VectorXd> grid_ne, grid_bu;
  for (double a : {0.15, 0.5, 0.9})
    for (double b : {0.2, 0.6, 0.95}) grid_ne.push_back(vec2(a, b));
  for (double a : {0.6, 1.2, 1.9})
    for (double b : {0.55, 1.0, 1.8}) grid_bu.push_back(vec2(a, b));

  const FlatnessReport ne =
      flatness_check(PotentialSpec::neg_entropy(2), grid_ne);
  CHECK(ne.theta_residual <= 1e-3);
  CHECK(ne.eta_residual <= 1e-3);
  const FlatnessReport bu = flatness_check(PotentialSpec::burg(2), grid_bu);
  CHECK(bu.theta_residual <= 1e-3);
  CHECK(bu.eta_residual <= 1e-3);
  const FlatnessReport se = flatness_check(
      sum_exp_chart(2), {VectorXd::Zero(2), vec2(0.3, -0.5)});
  CHECK(se.theta_residual <= 1e-3);
  CHECK(se.eta_residual <= 1e-3);

  CHECK_THROWS_AS(flatness_check(PotentialSpec::neg_entropy(2), {}),
                  ValidationError);
}

TEST_CASE("the dual chord meets affine sets orthogonally at the projection") {
  const ConstraintSet slice = mass_slice(1.2);
  CHECK(orthogonality_check(PotentialSpec::gamma_norm(2, 0.5), slice,
                            vec2(0.9, 0.15)) <= 1e-10);
  CHECK(orthogonality_check(PotentialSpec::neg_entropy(2), slice,
                            vec2(0.9, 0.15)) <= 1e-5);

  // a member of the set projects to itself: the chord is empty
  CHECK(orthogonality_check(PotentialSpec::neg_entropy(2), slice,
                            vec2(0.5, 0.7)) == 0.0);

  SUBCASE("orthogonality and the pythagorean identity certify each other") {
    const PythagorasReport py =
        pythagoras_check(PotentialSpec::neg_entropy(2), slice,
                         vec2(0.9, 0.15), vec2(0.3, 0.9), Side::Left);
    CHECK(std::abs(py.slack) <= 1e-6);
    CHECK(orthogonality_check(PotentialSpec::neg_entropy(2), slice,
                              vec2(0.9, 0.15)) <= 1e-5);
  }

  SUBCASE("a full-rank affine set is a point and trivially orthogonal") {
    const ConstraintSet point =
        ConstraintSet::affine(MatrixXd::Identity(2, 2), vec2(0.7, 0.4));
    CHECK(orthogonality_check(PotentialSpec::neg_entropy(2), point,
                              vec2(0.9, 0.15)) == 0.0);
  }

  SUBCASE("only affine sets carry the differential statement") {
    const ConstraintSet box =
        ConstraintSet::box(vec2(0.2, 0.2), vec2(0.6, 0.6));
    CHECK_THROWS_AS(orthogonality_check(PotentialSpec::neg_entropy(2), box,
                                        vec2(0.9, 0.15)),
                    ValidationError);
    CHECK_THROWS_AS(orthogonality_check(PotentialSpec::neg_entropy(3), slice,
                                        vec2(0.9, 0.15)),
                    ValidationError);
  }
}

TEST_CASE("geometry reports aggregate the point diagnostics") {
  const VectorXd p = vec2(0.5, 0.8);
  const GeometryReport report =
      geometry_report(PotentialSpec::neg_entropy(2), p, 16);
  CHECK(report.point == p);
  CHECK(report.metric(0, 0) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(report.metric(1, 1) == doctest::Approx(1.25).epsilon(1e-6));
  CHECK(report.gamma.dim() == 2);
  CHECK(report.gamma.max_abs() <= 1e-3);  // θ is the flat chart
  // Γ~_iii = Ψ'''(pᵢ) = −1/pᵢ²; everything off-diagonal vanishes
  CHECK(std::abs(report.gamma_dual(0, 0, 0) + 4.0) <= 1e-3);
  CHECK(std::abs(report.gamma_dual(1, 1, 1) + 1.5625) <= 1e-3);
  CHECK(std::abs(report.gamma_dual(0, 1, 1)) <= 1e-3);
  CHECK(report.norden_sen_residual <= 5e-3);
  CHECK(report.flatness_residual <= 1e-3);

  // row-major [i][j][k] storage is part of the external contract
  CHECK(report.gamma_dual.data()[(0 * 2 + 1) * 2 + 1] ==
        report.gamma_dual(0, 1, 1));
  CHECK(Tensor3().dim() == 0);
}
