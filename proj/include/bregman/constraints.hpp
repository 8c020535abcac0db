#pragma once

#include <Eigen/Core>

#include <vector>

namespace bregman {

struct Halfspace {
  Eigen::VectorXd a;
  double c = 0.0;  // ⟨a, x⟩ ≤ c
};

/// Convex target set for projections.  Every kind lowers to the canonical
/// solver form
///     eq_matrix()·x = eq_rhs(),   ineq_matrix()·x ≤ ineq_rhs(),
/// i.e. affine → equalities only, halfspaces/box → inequalities only,
/// simplex → one mass equality plus nonnegativity rows.
class ConstraintSet {
 public:
  enum class Kind { Affine, Halfspaces, Box, Simplex };

  /// Equalities A x = b with full row rank (rank-revealing QR, tol 1e-10).
  static ConstraintSet affine(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);
  static ConstraintSet halfspaces(std::vector<Halfspace> rows, Eigen::Index n);
  static ConstraintSet box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
  static ConstraintSet simplex(double mass, Eigen::Index n);

  Kind kind() const { return kind_; }
  Eigen::Index ambient_dim() const { return n_; }
  double simplex_mass() const { return mass_; }
  const Eigen::VectorXd& box_lo() const { return lo_; }
  const Eigen::VectorXd& box_hi() const { return hi_; }
  const std::vector<Halfspace>& halfspace_rows() const { return rows_; }

  const Eigen::MatrixXd& eq_matrix() const { return eq_a_; }
  const Eigen::VectorXd& eq_rhs() const { return eq_b_; }
  const Eigen::MatrixXd& ineq_matrix() const { return ineq_g_; }
  const Eigen::VectorXd& ineq_rhs() const { return ineq_h_; }
  bool has_inequalities() const { return ineq_g_.rows() > 0; }

  /// Worst constraint violation at x (0 when x is in the set).
  double violation(const Eigen::VectorXd& x) const;
  bool contains(const Eigen::VectorXd& x, double tol = 1e-8) const {
    return violation(x) <= tol;
  }

  /// The same set intersected with the closed nonnegative orthant — the
  /// feasible region of projections whose embedded carrier is a positive
  /// cone.  Box bounds are clamped; affine and halfspace sets gain −x ≤ 0
  /// rows; a simplex already carries them.
  ConstraintSet intersect_nonneg_orthant() const;

 private:
  ConstraintSet() = default;

  Kind kind_ = Kind::Affine;
  Eigen::Index n_ = 0;
  double mass_ = 0.0;
  Eigen::VectorXd lo_, hi_;
  std::vector<Halfspace> rows_;
  Eigen::MatrixXd eq_a_, ineq_g_;
  Eigen::VectorXd eq_b_, ineq_h_;
};

}  // namespace bregman
