#include "bregman/orlicz.hpp"

#include <cmath>

#include "bregman/errors.hpp"

namespace bregman {

OrliczFunction OrliczFunction::from_table(
    const std::vector<std::array<double, 2>>& samples) {
  OrliczFunction f;
  f.curve_ = MonotoneCurve::fit(samples);  // increasing from (0, 0) or throws

  const Eigen::VectorXd& t = f.curve_.knots();
  const Eigen::VectorXd& v = f.curve_.values();
  double prev_slope = 0.0;
  for (Eigen::Index i = 0; i + 1 < t.size(); ++i) {
    const double slope = (v[i + 1] - v[i]) / (t[i + 1] - t[i]);
    if (i > 0 && !(slope > prev_slope)) {
      throw ValidationError("orlicz table is not strictly convex");
    }
    prev_slope = slope;
  }

  if (f.curve_.t_max() < 1.0) {
    throw ValidationError("orlicz table must reach t = 1");
  }
  if (std::abs(f.curve_(1.0) - 1.0) > 1e-9) {
    throw ValidationError("orlicz function must have value 1 at t = 1");
  }

  for (Eigen::Index i = 1; i < t.size(); ++i) {
    if (2.0 * t[i] > f.curve_.t_max()) break;
    const double ratio = f.curve_(2.0 * t[i]) / v[i];
    if (!(ratio > 2.0)) {
      throw ValidationError("orlicz table grows sublinearly under doubling");
    }
    if (!(ratio <= 1e6)) {
      throw ValidationError("orlicz table violates the doubling bound");
    }
  }
  return f;
}

}  // namespace bregman
