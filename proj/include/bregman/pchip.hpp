#pragma once

#include <Eigen/Core>

#include <array>
#include <functional>
#include <vector>

namespace bregman {

/// Adaptive Simpson quadrature with the usual /15 Richardson acceptance test.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol);

/// Shape-preserving cubic interpolant of a strictly increasing sample table
/// (Fritsch-Carlson slope limiting), the representation used for the radial
/// profile of norm-integral potentials.
///
/// Left of the first knot the curve is undefined (tables start at t = 0);
/// right of the last knot it continues linearly with the terminal slope, so
/// an increasing table yields a curve increasing to +inf on all of [0, inf[.
class MonotoneCurve {
 public:
  MonotoneCurve() = default;

  /// Builds from [[t, v], ...] rows.  Requires >= 2 rows, t strictly
  /// increasing starting at 0, v strictly increasing, v(0) = 0.
  static MonotoneCurve fit(const std::vector<std::array<double, 2>>& samples);

  double operator()(double t) const;
  double derivative(double t) const;

  /// Integral of the curve over [0, t], adaptive quadrature split at knots.
  double integral(double t, double tol = 1e-10) const;

  /// Preimage of v >= 0 under the (increasing) curve, tolerance 1e-12.
  double inverse(double v) const;

  double t_max() const { return t_[t_.size() - 1]; }
  double v_max() const { return v_[v_.size() - 1]; }
  bool empty() const { return t_.size() == 0; }

  const Eigen::VectorXd& knots() const { return t_; }
  const Eigen::VectorXd& values() const { return v_; }

 private:
  Eigen::Index interval(double t) const;

  Eigen::VectorXd t_, v_, d_;  // knots, values, knot derivatives
};

}  // namespace bregman
