#pragma once

#include <Eigen/Core>

#include "bregman/orlicz.hpp"

namespace bregman {

/// ℓ_p norm and its gradient for p ∈ ]1,∞[.  The gradient at 0 is returned
/// as the zero vector — the continuous extension every power-of-norm
/// potential with exponent > 1 relies on.
double lp_norm(const Eigen::VectorXd& x, double p);
Eigen::VectorXd lp_norm_gradient(const Eigen::VectorXd& x, double p);

/// Weighted Luxemburg norm N(u) = inf{k > 0 : Σᵢ μᵢ φ(uᵢ/k) ≤ 1} of an
/// Orlicz function, with the implicit-function gradient
///   ∂N/∂uᵢ = μᵢ φ'(uᵢ/N) N / Σⱼ μⱼ φ'(uⱼ/N) uⱼ.
/// Embedded normalized densities satisfy Σ μᵢ φ(uᵢ) = 1 and therefore sit
/// exactly on the unit sphere N = 1.
class LuxemburgNorm {
 public:
  LuxemburgNorm(OrliczFunction phi, Eigen::VectorXd weights);

  double value(const Eigen::VectorXd& u) const;  // 0 at u = 0
  Eigen::VectorXd gradient(const Eigen::VectorXd& u) const;  // u ≠ 0 only

  const OrliczFunction& phi() const { return phi_; }
  const Eigen::VectorXd& weights() const { return mu_; }
  Eigen::Index dim() const { return mu_.size(); }

 private:
  OrliczFunction phi_;
  Eigen::VectorXd mu_;
};

}  // namespace bregman
