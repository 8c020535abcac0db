#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <utility>

#include "bregman/errors.hpp"

namespace bregman {

/// Spectral threshold deciding positivity classes and "equal to boundary"
/// questions for matrix arguments.
inline constexpr double kSpectralThreshold = 1e-12;

/// Hermitian (or real symmetric) dense matrix.  The constructor accepts
/// inputs off-symmetric by at most 1e-12 in max norm, stores the symmetrized
/// part (X+X*)/2, and records the size of the correction.  Scalar is double
/// or std::complex<double>; both run through the same code paths.
template <typename Scalar>
class Hermitian {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit Hermitian(const Matrix& m) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
      throw ValidationError("hermitian matrix must be square and nonempty");
    }
    if (!m.allFinite()) {
      throw ValidationError("hermitian matrix has non-finite entries");
    }
    const double deviation = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (!(deviation <= 1e-12)) {
      throw ValidationError("matrix is not hermitian within 1e-12");
    }
    mat_ = 0.5 * (m + m.adjoint());
    correction_ = deviation;
  }

  const Matrix& matrix() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }
  double symmetrization_correction() const { return correction_; }

 private:
  Matrix mat_;
  double correction_ = 0.0;
};

template <typename Scalar>
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;                // ordered nonincreasingly
  typename Hermitian<Scalar>::Matrix vectors; // unitary, columns follow order
};

/// Eigendecomposition with nonincreasing eigenvalues and a deterministic
/// phase convention: each column is rotated so its largest-magnitude
/// component is real and positive.
template <typename Scalar>
EigenDecomposition<Scalar> eigen_nonincreasing(const Hermitian<Scalar>& x) {
  Eigen::SelfAdjointEigenSolver<typename Hermitian<Scalar>::Matrix> solver(
      x.matrix());
  if (solver.info() != Eigen::Success) {
    throw ValidationError("eigendecomposition did not converge");
  }
  const Eigen::Index n = x.dim();
  EigenDecomposition<Scalar> ed;
  ed.eigenvalues = solver.eigenvalues().reverse();
  ed.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto col = solver.eigenvectors().col(n - 1 - k);
    Eigen::Index imax = 0;
    double amax = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(col(i));
      if (a > amax) {
        amax = a;
        imax = i;
      }
    }
    const Scalar phase = col(imax) / Scalar(amax);
    ed.vectors.col(k) = col.array() / phase;
  }
  return ed;
}

enum class PositivityClass { StrictlyPositive, PositiveSemidefinite, Indefinite };

/// Classifies a nonincreasing spectrum against the spectral threshold.
inline PositivityClass classify_spectrum(const Eigen::VectorXd& eigenvalues) {
  const double low = eigenvalues(eigenvalues.size() - 1);
  if (low > kSpectralThreshold) return PositivityClass::StrictlyPositive;
  if (low >= -kSpectralThreshold) return PositivityClass::PositiveSemidefinite;
  return PositivityClass::Indefinite;
}

template <typename Scalar>
PositivityClass classify(const Hermitian<Scalar>& x) {
  return classify_spectrum(eigen_nonincreasing(x).eigenvalues);
}

}  // namespace bregman
