#include <Eigen/Core>
#include <Eigen/QR>

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "bregman/errors.hpp"
#include "bregman/hermitian.hpp"
#include "bregman/potentials.hpp"
#include "bregman/rng.hpp"
#include "bregman/spectral.hpp"
#include "doctest.h"
#include "support.hpp"

using bregman::Hermitian;
using bregman::MatrixDivSpec;
using bregman::PositivityClass;
using bregman::PotentialSpec;
using Eigen::VectorXd;
using Complex = std::complex<double>;

namespace {

template <typename Scalar>
using Mat = typename Hermitian<Scalar>::Matrix;

template <typename Scalar>
Scalar random_entry(bregman::Rng& rng);

template <>
double random_entry<double>(bregman::Rng& rng) {
  return rng.normal();
}

template <>
Complex random_entry<Complex>(bregman::Rng& rng) {
  const double re = rng.normal();
  const double im = rng.normal();
  return {re, im};
}

template <typename Scalar>
Mat<Scalar> random_square(bregman::Rng& rng, Eigen::Index n) {
  Mat<Scalar> m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = random_entry<Scalar>(rng);
  }
  return m;
}

template <typename Scalar>
Hermitian<Scalar> random_hermitian(bregman::Rng& rng, Eigen::Index n) {
  const Mat<Scalar> m = random_square<Scalar>(rng, n);
  return Hermitian<Scalar>(0.5 * (m + m.adjoint()).eval());
}

template <typename Scalar>
Mat<Scalar> random_unitary(bregman::Rng& rng, Eigen::Index n) {
  Eigen::HouseholderQR<Mat<Scalar>> qr(random_square<Scalar>(rng, n));
  Mat<Scalar> q = qr.householderQ();
  return q;
}

/// Hermitian matrix with the prescribed spectrum in a random eigenbasis.
template <typename Scalar>
Hermitian<Scalar> with_spectrum(bregman::Rng& rng, const VectorXd& lam) {
  const Mat<Scalar> u = random_unitary<Scalar>(rng, lam.size());
  return Hermitian<Scalar>(
      (u * lam.cast<Scalar>().asDiagonal() * u.adjoint()).eval());
}

template <typename Scalar>
double commutator_norm(const Hermitian<Scalar>& a, const Hermitian<Scalar>& b) {
  return (a.matrix() * b.matrix() - b.matrix() * a.matrix())
      .cwiseAbs()
      .maxCoeff();
}

/// Non-commuting pair with spectra drawn uniformly from [lo, hi].
template <typename Scalar>
std::pair<Hermitian<Scalar>, Hermitian<Scalar>> noncommuting_pair(
    bregman::Rng& rng, Eigen::Index n, double lo, double hi) {
  for (;;) {
    auto a = with_spectrum<Scalar>(rng, rng.uniform_vector(n, lo, hi));
    auto b = with_spectrum<Scalar>(rng, rng.uniform_vector(n, lo, hi));
    if (commutator_norm(a, b) > 1e-8 &&
        (a.matrix() - b.matrix()).cwiseAbs().maxCoeff() > 1e-3) {
      return {std::move(a), std::move(b)};
    }
  }
}

template <typename Scalar>
Hermitian<Scalar> diag2(double a, double b) {
  Mat<Scalar> m = Mat<Scalar>::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return Hermitian<Scalar>(m);
}

template <typename Scalar>
Hermitian<Scalar> pauli_x() {
  Mat<Scalar> m(2, 2);
  m << 0, 1, 1, 0;
  return Hermitian<Scalar>(m);
}

struct AgreementCase {
  MatrixDivSpec matrix;
  PotentialSpec (*vector)(Eigen::Index);
  double lo, hi;
};

std::vector<std::pair<std::string, AgreementCase>> agreement_cases() {
  return {
      {"umegaki",
       {MatrixDivSpec::umegaki(), +[](Eigen::Index n) {
          return PotentialSpec::neg_entropy(n);
        }, 0.2, 3.0}},
      {"logdet",
       {MatrixDivSpec::logdet(), +[](Eigen::Index n) {
          return PotentialSpec::burg(n);
        }, 0.2, 3.0}},
      {"fermi",
       {MatrixDivSpec::fermi(), +[](Eigen::Index n) {
          return PotentialSpec::fermi_dirac(n);
        }, 0.08, 0.92}},
      {"gamma-norm(0.5)",
       {MatrixDivSpec::gamma_norm(0.5), +[](Eigen::Index n) {
          return PotentialSpec::gamma_norm(n, 0.5);
        }, 0.2, 3.0}},
      {"gamma-norm(0.4)",
       {MatrixDivSpec::gamma_norm(0.4), +[](Eigen::Index n) {
          return PotentialSpec::gamma_norm(n, 0.4);
        }, 0.2, 3.0}},
      {"alpha(0.5)",
       {MatrixDivSpec::alpha_power(0.5), +[](Eigen::Index n) {
          return PotentialSpec::alpha_power(n, 0.5);
        }, 0.2, 3.0}},
      {"alpha(-1)",
       {MatrixDivSpec::alpha_power(-1.0), +[](Eigen::Index n) {
          return PotentialSpec::alpha_power(n, -1.0);
        }, 0.2, 3.0}},
  };
}

}  // namespace

TEST_CASE_TEMPLATE("hermitian wrapper validates and symmetrizes", T, double,
                   Complex) {
  CHECK_THROWS_AS((Hermitian<T>(Mat<T>::Zero(0, 0))), bregman::ValidationError);
  Mat<T> skew(2, 2);
  skew << 1, 2, 3, 1;
  CHECK_THROWS_AS((Hermitian<T>(skew)), bregman::ValidationError);
  Mat<T> near(2, 2);
  near << 1.0, 0.5, 0.5 + 1e-13, 2.0;
  const Hermitian<T> h(near);
  CHECK(h.symmetrization_correction() <= 1e-12);
  CHECK(h.symmetrization_correction() > 0.0);
  CHECK((h.matrix() - h.matrix().adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("complex matrices must have real diagonals") {
  Mat<Complex> m = Mat<Complex>::Zero(2, 2);
  m(0, 0) = Complex(1.0, 1e-6);
  m(1, 1) = 2.0;
  CHECK_THROWS_AS((Hermitian<Complex>(m)), bregman::ValidationError);
  m(0, 0) = 1.0;
  m(0, 1) = Complex(0.0, 0.5);
  m(1, 0) = Complex(0.0, -0.5);
  CHECK(bregman::eigen_nonincreasing(Hermitian<Complex>(m)).eigenvalues(0) ==
        doctest::Approx(std::sqrt(0.5) + 1.5).epsilon(1e-12));
}

TEST_CASE_TEMPLATE("eigendecomposition orders, phases, and reconstructs", T,
                   double, Complex) {
  Mat<T> d3 = Mat<T>::Zero(3, 3);
  d3(0, 0) = 1.0;
  d3(1, 1) = 3.0;
  d3(2, 2) = 2.0;
  const auto ed = bregman::eigen_nonincreasing(Hermitian<T>(d3));
  CHECK(ed.eigenvalues(0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(ed.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ed.eigenvalues(2) == doctest::Approx(1.0).epsilon(1e-14));

  const auto flip = bregman::eigen_nonincreasing(pauli_x<T>());
  CHECK(flip.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(flip.eigenvalues(1) == doctest::Approx(-1.0).epsilon(1e-14));

  const auto id = bregman::eigen_nonincreasing(Hermitian<T>(Mat<T>::Identity(2, 2)));
  CHECK(id.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(id.eigenvalues(1) == doctest::Approx(1.0));

  bregman::Rng rng(101);
  for (Eigen::Index n = 2; n <= 6; ++n) {
    const auto x = random_hermitian<T>(rng, n);
    const auto e = bregman::eigen_nonincreasing(x);
    const double xnorm = x.matrix().norm();
    CHECK((e.vectors * e.eigenvalues.template cast<T>().asDiagonal() *
               e.vectors.adjoint() -
           x.matrix())
              .norm() <= 1e-10 * xnorm);
    CHECK((e.vectors.adjoint() * e.vectors - Mat<T>::Identity(n, n)).norm() <=
          1e-10);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      CHECK(e.eigenvalues(k) >= e.eigenvalues(k + 1));
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::Index imax = 0;
      double amax = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(e.vectors(i, k)) > amax) {
          amax = std::abs(e.vectors(i, k));
          imax = i;
        }
      }
      CHECK(std::real(e.vectors(imax, k)) > 0.0);
      CHECK(std::abs(std::imag(T(e.vectors(imax, k)))) <= 1e-12);
    }
  }
}

TEST_CASE("positivity classes follow the spectral threshold") {
  CHECK(bregman::classify(diag2<double>(1, 2)) ==
        PositivityClass::StrictlyPositive);
  CHECK(bregman::classify(diag2<double>(1, 0)) ==
        PositivityClass::PositiveSemidefinite);
  CHECK(bregman::classify(diag2<double>(1, 5e-13)) ==
        PositivityClass::PositiveSemidefinite);
  CHECK(bregman::classify(diag2<double>(1, 2e-12)) ==
        PositivityClass::StrictlyPositive);
  CHECK(bregman::classify(diag2<double>(1, -1)) == PositivityClass::Indefinite);
}

TEST_CASE_TEMPLATE("spectral potential values reduce to the eigenvalue vector",
                   T, double, Complex) {
  CHECK(bregman::spectral_potential_eval(PotentialSpec::neg_entropy(2),
                                         diag2<T>(1, 1))
            .value() == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(bregman::spectral_potential_eval(
            PotentialSpec::burg(3), Hermitian<T>(Mat<T>::Identity(3, 3)))
            .value() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(bregman::spectral_potential_eval(PotentialSpec::gamma_norm(2, 0.5),
                                         pauli_x<T>())
            .value() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bregman::spectral_potential_eval(PotentialSpec::neg_entropy(2),
                                         diag2<T>(1, -1))
            .is_infinite());
  CHECK_THROWS_AS(bregman::spectral_potential_eval(
                      PotentialSpec::neg_entropy(3), diag2<T>(1, 1)),
                  bregman::ValidationError);
}

TEST_CASE_TEMPLATE("spectral gradient closed forms", T, double, Complex) {
  const double e1 = std::exp(1.0);
  const auto lg = bregman::spectral_grad(PotentialSpec::neg_entropy(2),
                                         diag2<T>(e1, e1 * e1));
  CHECK(std::real(T(lg.matrix()(0, 0))) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::real(T(lg.matrix()(1, 1))) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(T(lg.matrix()(0, 1))) <= 1e-12);

  bregman::Rng rng(103);
  const auto x = random_hermitian<T>(rng, 3);
  const auto gx =
      bregman::spectral_grad(PotentialSpec::gamma_norm(3, 0.5), x);
  CHECK((gx.matrix() - x.matrix()).cwiseAbs().maxCoeff() <= 1e-12);

  const auto bg =
      bregman::spectral_grad(PotentialSpec::burg(2), diag2<T>(2, 4));
  CHECK(std::real(T(bg.matrix()(0, 0))) ==
        doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(std::real(T(bg.matrix()(1, 1))) ==
        doctest::Approx(-0.25).epsilon(1e-12));

  CHECK_THROWS_AS(
      bregman::spectral_grad(PotentialSpec::neg_entropy(2), diag2<T>(1, -1)),
      bregman::DomainError);
}

TEST_CASE_TEMPLATE("spectral gradient matches directional finite differences",
                   T, double, Complex) {
  bregman::Rng rng(107);
  const Eigen::Index n = 4;
  for (const auto& [name, spec] : testsupport::family_specs(n)) {
    CAPTURE(name);
    const VectorXd lam = bregman::sample_interior(spec, rng);
    const auto x = with_spectrum<T>(rng, lam);
    const auto grad = bregman::spectral_grad(spec, x);
    for (int k = 0; k < 20; ++k) {
      auto dir = random_hermitian<T>(rng, n);
      const Mat<T> d = dir.matrix() / dir.matrix().norm();
      const double t = 1e-5;
      const double fp =
          bregman::spectral_potential_eval(
              spec, Hermitian<T>((x.matrix() + t * d).eval()))
              .value();
      const double fm =
          bregman::spectral_potential_eval(
              spec, Hermitian<T>((x.matrix() - t * d).eval()))
              .value();
      const double fd = (fp - fm) / (2.0 * t);
      const double exact = std::real((grad.matrix() * d).trace());
      CHECK(std::abs(fd - exact) <= 1e-5 * (1.0 + std::abs(exact)));
    }
  }
}

TEST_CASE_TEMPLATE("closed matrix divergences reproduce the pinned examples",
                   T, double, Complex) {
  CHECK(std::abs(bregman::matrix_div(MatrixDivSpec::umegaki(),
                                     diag2<T>(0.5, 0.5), diag2<T>(0.5, 0.5))
                     .value()) <= 1e-13);
  Mat<T> two = Mat<T>::Identity(1, 1) * 2.0;
  Mat<T> one = Mat<T>::Identity(1, 1);
  CHECK(bregman::matrix_div(MatrixDivSpec::logdet(), Hermitian<T>(two),
                            Hermitian<T>(one))
            .value() == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-12));
  Mat<T> four = Mat<T>::Identity(1, 1) * 4.0;
  CHECK(bregman::matrix_div(MatrixDivSpec::alpha_power(0.5), Hermitian<T>(four),
                            Hermitian<T>(one))
            .value() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bregman::matrix_div(MatrixDivSpec::gamma_norm(0.5), pauli_x<T>(),
                            Hermitian<T>(Mat<T>::Identity(2, 2)))
            .value() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(bregman::matrix_div(MatrixDivSpec::fermi(), diag2<T>(0.5, 0.5),
                            diag2<T>(0.25, 0.25))
            .value() ==
        doctest::Approx(2 * 0.1438410362258904).epsilon(1e-9));
}

TEST_CASE_TEMPLATE("positivity gates return infinity outside each domain", T,
                   double, Complex) {
  const auto id = Hermitian<T>(Mat<T>::Identity(2, 2));
  CHECK(bregman::matrix_div(MatrixDivSpec::umegaki(), diag2<T>(1, -1), id)
            .is_infinite());
  CHECK(bregman::matrix_div(MatrixDivSpec::umegaki(), id, diag2<T>(1, 0))
            .is_infinite());
  CHECK(bregman::matrix_div(MatrixDivSpec::umegaki(), diag2<T>(1, 0), id)
            .is_finite());
  CHECK(bregman::matrix_div(MatrixDivSpec::logdet(), diag2<T>(1, 0), id)
            .is_infinite());
  CHECK(bregman::matrix_div(MatrixDivSpec::fermi(), diag2<T>(0.5, 1.2),
                            diag2<T>(0.5, 0.5))
            .is_infinite());
  CHECK(bregman::matrix_div(MatrixDivSpec::fermi(), diag2<T>(0.5, 1.0),
                            diag2<T>(0.5, 0.5))
            .is_finite());
  CHECK(bregman::matrix_div(MatrixDivSpec::fermi(), diag2<T>(0.5, 0.5),
                            diag2<T>(0.5, 1.0))
            .is_infinite());
  CHECK(bregman::matrix_div(MatrixDivSpec::gamma_norm(0.5), pauli_x<T>(),
                            diag2<T>(1, 0))
            .is_infinite());
  CHECK(bregman::matrix_div(MatrixDivSpec::alpha_power(-1.0), diag2<T>(1, 0), id)
            .is_infinite());
  CHECK(bregman::matrix_div(MatrixDivSpec::alpha_power(0.5), diag2<T>(1, 0), id)
            .is_finite());
  CHECK_THROWS_AS(
      bregman::matrix_div(MatrixDivSpec::umegaki(), id,
                          Hermitian<T>(Mat<T>::Identity(3, 3))),
      bregman::ValidationError);
}

TEST_CASE_TEMPLATE("closed forms agree with the generic spectral construction",
                   T, double, Complex) {
  for (const auto& [name, c] : agreement_cases()) {
    CAPTURE(name);
    bregman::Rng rng(109);
    for (Eigen::Index n = 2; n <= 6; ++n) {
      const PotentialSpec spec = c.vector(n);
      for (int k = 0; k < 8; ++k) {
        const auto [xi, zeta] = noncommuting_pair<T>(rng, n, c.lo, c.hi);
        const double closed = bregman::matrix_div(c.matrix, xi, zeta).value();
        const double generic =
            bregman::matrix_div_generic(spec, xi, zeta).value();
        CHECK(std::abs(closed - generic) <= 1e-8 * (1.0 + std::abs(closed)));
      }
    }
  }
}

TEST_CASE_TEMPLATE("matrix divergences are unitarily invariant", T, double,
                   Complex) {
  bregman::Rng rng(113);
  for (const auto& [name, c] : agreement_cases()) {
    CAPTURE(name);
    const auto [xi, zeta] = noncommuting_pair<T>(rng, 4, c.lo, c.hi);
    const double base = bregman::matrix_div(c.matrix, xi, zeta).value();
    for (int k = 0; k < 10; ++k) {
      const Mat<T> v = random_unitary<T>(rng, 4);
      const auto val = bregman::matrix_div(
          c.matrix, Hermitian<T>((v * xi.matrix() * v.adjoint()).eval()),
          Hermitian<T>((v * zeta.matrix() * v.adjoint()).eval()));
      CHECK(std::abs(val.value() - base) <= 1e-9);
    }
  }
}

TEST_CASE_TEMPLATE("matrix information axiom", T, double, Complex) {
  bregman::Rng rng(127);
  for (const auto& [name, c] : agreement_cases()) {
    CAPTURE(name);
    for (int k = 0; k < 50; ++k) {
      const auto [xi, zeta] = noncommuting_pair<T>(rng, 3, c.lo, c.hi);
      const double d = bregman::matrix_div(c.matrix, xi, zeta).value();
      CHECK(d >= 0.0);
      CHECK(d > 1e-10);
      CHECK(std::abs(bregman::matrix_div(c.matrix, xi, xi).value()) <= 1e-12);
    }
  }
}

TEST_CASE_TEMPLATE("logdet equals the whitened-argument identity", T, double,
                   Complex) {
  bregman::Rng rng(131);
  for (int k = 0; k < 20; ++k) {
    const auto [xi, zeta] = noncommuting_pair<T>(rng, 4, 0.2, 3.0);
    const auto ez = bregman::eigen_nonincreasing(zeta);
    Mat<T> root_inv =
        ez.vectors *
        ez.eigenvalues.array().rsqrt().matrix().template cast<T>().asDiagonal() *
        ez.vectors.adjoint();
    const Hermitian<T> white((root_inv * xi.matrix() * root_inv).eval());
    const VectorXd lam = bregman::eigen_nonincreasing(white).eigenvalues;
    const double h = lam.sum() - lam.array().log().sum();
    const double expected = h - static_cast<double>(lam.size());
    CHECK(bregman::matrix_div(MatrixDivSpec::logdet(), xi, zeta).value() ==
          doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE_TEMPLATE("generic lift conventions", T, double, Complex) {
  const auto id = Hermitian<T>(Mat<T>::Identity(2, 2));
  CHECK_THROWS_AS(bregman::matrix_div_generic(PotentialSpec::neg_entropy(2),
                                              id, diag2<T>(1, 0)),
                  bregman::DomainError);
  CHECK(bregman::matrix_div_generic(PotentialSpec::neg_entropy(2),
                                    diag2<T>(1, -1), id)
            .is_infinite());
  CHECK(bregman::matrix_div_generic(PotentialSpec::neg_entropy(2), id, id)
            .value() == 0.0);
  bregman::Rng rng(137);
  const auto [xi, zeta] = noncommuting_pair<T>(rng, 3, 0.2, 3.0);
  const double quad =
      bregman::matrix_div_generic(PotentialSpec::gamma_norm(3, 0.5), xi, zeta)
          .value();
  CHECK(quad == doctest::Approx(0.5 * (xi.matrix() - zeta.matrix()).squaredNorm())
                    .epsilon(1e-12));
}
