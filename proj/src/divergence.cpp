#include "bregman/divergence.hpp"

namespace bregman {

ExtendedReal bregman_div(const PotentialSpec& spec, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y) {
  if (!in_domain_interior(spec, y)) return ExtendedReal::infinity();
  const ExtendedReal fx = eval_potential(spec, x);
  if (!fx.is_finite()) return ExtendedReal::infinity();
  const double fy = eval_potential(spec, y).value();
  const double d = fx.value() - fy - (x - y).dot(grad_potential(spec, y));
  // the formula is exact on the diagonal but roundoff may leave a tiny
  // negative residue; clamp it so the information axiom holds literally
  return d < 0.0 && d > -1e-13 ? 0.0 : d;
}

double three_point_gap(const PotentialSpec& spec, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  const double dxz = bregman_div(spec, x, z).value();
  const double dxy = bregman_div(spec, x, y).value();
  const double dyz = bregman_div(spec, y, z).value();
  const double cross =
      (x - y).dot(grad_potential(spec, z) - grad_potential(spec, y));
  return dxz - (dxy + dyz - cross);
}

}  // namespace bregman
