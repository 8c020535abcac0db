#pragma once

#include <Eigen/Core>

#include "bregman/extended_real.hpp"
#include "bregman/potentials.hpp"

namespace bregman {

/// D_Φ(x, y) = Φ(x) − Φ(y) − ⟨x−y, ∇Φ(y)⟩; +inf when y is not interior or
/// x is outside efd(Φ).  Nonnegative, zero exactly on the diagonal.
ExtendedReal bregman_div(const PotentialSpec& spec, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y);

/// Residual of the three-point identity
///   D(x,z) = D(x,y) + D(y,z) − ⟨x−y, ∇Φ(z) − ∇Φ(y)⟩,
/// zero up to roundoff on interior triples.
double three_point_gap(const PotentialSpec& spec, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y, const Eigen::VectorXd& z);

}  // namespace bregman
