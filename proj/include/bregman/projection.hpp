#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "bregman/constraints.hpp"
#include "bregman/potentials.hpp"

namespace bregman {

enum class Side { Left, Right };

struct SolveOptions {
  double kkt_tol = 1e-9;
  double constraint_tol = 1e-8;
  int max_iterations = 500;
  double boundary_fraction = 0.99;  // fraction-to-boundary step damping
  bool keep_trace = false;
  std::optional<Eigen::VectorXd> start;  // must lie in int efd when given
};

struct ProjectionResult {
  Eigen::VectorXd point;
  double value = 0.0;  // divergence at the projection
  int iterations = 0;
  double kkt_residual = 0.0;
  Side side = Side::Left;
  std::vector<double> trace;  // per-iteration KKT residual (when kept)
};

/// argmin_{x ∈ C} D(x, y).  The minimand is Φ(x) − ⟨x, ∇Φ(y)⟩ up to a
/// constant, so the problem is convex; solved by a primal-dual interior-point
/// method on the canonical constraint form (plain Newton-KKT when the set is
/// purely affine).  The potential's own barrier keeps iterates in int efd.
/// Throws DomainError (y outside int efd), ValidationError (no strictly
/// feasible point), or ConvergenceError (iteration cap).
ProjectionResult left_project(const PotentialSpec& spec, const ConstraintSet& set,
                              const Eigen::VectorXd& y,
                              const SolveOptions& options = {});

/// argmin_{x ∈ C} D(y, x).  Not convex in general; the same solver runs with
/// the exact Hessian ∇²Φ(x) + ∇³Φ(x)∘(x−y) under LDLᵀ-style regularization,
/// which finds the global minimizer on the scales exercised here.
ProjectionResult right_project(const PotentialSpec& spec, const ConstraintSet& set,
                               const Eigen::VectorXd& y,
                               const SolveOptions& options = {});

struct PythagorasReport {
  double lhs = 0.0;   // D(x,P) + D(P,y)  (mirrored for Side::Right)
  double rhs = 0.0;   // D(x,y)
  double slack = 0.0; // rhs − lhs: ≥ 0 on convex sets, ≈ 0 on affine ones
  ProjectionResult projection;
};

/// Projects y onto the set and evaluates the generalized Pythagorean
/// inequality against a feasible comparison point x.
PythagorasReport pythagoras_check(const PotentialSpec& spec,
                                  const ConstraintSet& set,
                                  const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& x, Side side,
                                  const SolveOptions& options = {});

}  // namespace bregman
