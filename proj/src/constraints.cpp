#include "bregman/constraints.hpp"

#include <Eigen/QR>

#include <cmath>
#include <utility>

#include "bregman/errors.hpp"

namespace bregman {

ConstraintSet ConstraintSet::affine(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.rows() == 0 || a.cols() == 0) throw ValidationError("affine set needs a nonempty matrix");
  if (a.rows() != b.size()) throw ValidationError("affine rhs size mismatch");
  if (a.rows() > a.cols()) throw ValidationError("affine set has more equalities than variables");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < a.rows()) throw ValidationError("affine constraint matrix is rank deficient");
  ConstraintSet s;
  s.kind_ = Kind::Affine;
  s.n_ = a.cols();
  s.eq_a_ = a;
  s.eq_b_ = b;
  return s;
}

ConstraintSet ConstraintSet::halfspaces(std::vector<Halfspace> rows, Eigen::Index n) {
  if (n <= 0) throw ValidationError("halfspace set needs a positive dimension");
  if (rows.empty()) throw ValidationError("halfspace set needs at least one row");
  ConstraintSet s;
  s.kind_ = Kind::Halfspaces;
  s.n_ = n;
  s.ineq_g_.resize(static_cast<Eigen::Index>(rows.size()), n);
  s.ineq_h_.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.a.size() != n) throw ValidationError("halfspace normal has wrong dimension");
    if (row.a.lpNorm<Eigen::Infinity>() == 0.0) throw ValidationError("halfspace normal is zero");
    s.ineq_g_.row(static_cast<Eigen::Index>(i)) = row.a.transpose();
    s.ineq_h_(static_cast<Eigen::Index>(i)) = row.c;
  }
  s.rows_ = std::move(rows);
  return s;
}

ConstraintSet ConstraintSet::box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  if (lo.size() == 0 || lo.size() != hi.size()) throw ValidationError("box bounds size mismatch");
  if (((hi - lo).array() < 0.0).any()) throw ValidationError("box has lo > hi");
  const Eigen::Index n = lo.size();
  ConstraintSet s;
  s.kind_ = Kind::Box;
  s.n_ = n;
  s.lo_ = lo;
  s.hi_ = hi;
  s.ineq_g_.resize(2 * n, n);
  s.ineq_g_ << Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
  s.ineq_h_.resize(2 * n);
  s.ineq_h_ << hi, -lo;
  return s;
}

ConstraintSet ConstraintSet::simplex(double mass, Eigen::Index n) {
  if (n <= 0) throw ValidationError("simplex needs a positive dimension");
  if (!std::isfinite(mass)) throw ValidationError("simplex mass must be finite");
  ConstraintSet s;
  s.kind_ = Kind::Simplex;
  s.n_ = n;
  s.mass_ = mass;
  s.eq_a_ = Eigen::MatrixXd::Ones(1, n);
  s.eq_b_ = Eigen::VectorXd::Constant(1, mass);
  s.ineq_g_ = -Eigen::MatrixXd::Identity(n, n);
  s.ineq_h_ = Eigen::VectorXd::Zero(n);
  return s;
}

double ConstraintSet::violation(const Eigen::VectorXd& x) const {
  if (x.size() != n_) throw ValidationError("point has wrong dimension for constraint set");
  double v = 0.0;
  if (eq_a_.rows() > 0) v = (eq_a_ * x - eq_b_).lpNorm<Eigen::Infinity>();
  if (ineq_g_.rows() > 0) v = std::max(v, (ineq_g_ * x - ineq_h_).maxCoeff());
  return std::max(v, 0.0);
}

ConstraintSet ConstraintSet::intersect_nonneg_orthant() const {
  if (kind_ == Kind::Simplex) return *this;
  if (kind_ == Kind::Box) return box(lo_.cwiseMax(0.0), hi_);
  ConstraintSet s = *this;
  const Eigen::Index m = ineq_g_.rows();
  s.ineq_g_.conservativeResize(m + n_, n_);
  s.ineq_g_.bottomRows(n_) = -Eigen::MatrixXd::Identity(n_, n_);
  s.ineq_h_.conservativeResize(m + n_);
  s.ineq_h_.tail(n_).setZero();
  for (Eigen::Index i = 0; i < n_; ++i) {
    s.rows_.push_back({-Eigen::VectorXd::Unit(n_, i), 0.0});
  }
  return s;
}

}  // namespace bregman
