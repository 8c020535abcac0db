#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace bregman {

/// Argument outside the effective domain of a potential / divergence, or a
/// parameter outside its admissible range.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Structurally invalid input: mismatched dimensions, rank-deficient
/// constraint matrices, non-monotone sample tables, and the like.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed serialized input (bad JSON, unknown fields, wrong types).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative routine ran out of iterations before reaching its tolerance.
/// Carries the best iterate seen so the caller can inspect how close it got.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd best_point,
                   double residual, int iterations)
      : std::runtime_error(what),
        best_point_(std::move(best_point)),
        residual_(residual),
        iterations_(iterations) {}

  const Eigen::VectorXd& best_point() const { return best_point_; }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  Eigen::VectorXd best_point_;
  double residual_ = 0.0;
  int iterations_ = 0;
};

}  // namespace bregman
