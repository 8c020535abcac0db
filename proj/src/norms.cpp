#include "bregman/norms.hpp"

#include <cmath>
#include <utility>

#include "bregman/errors.hpp"

namespace bregman {

double lp_norm(const Eigen::VectorXd& x, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw ValidationError("lp norm needs p in ]1, inf[");
  }
  const double m = x.lpNorm<Eigen::Infinity>();
  if (m == 0.0) return 0.0;
  // factor out the max to avoid overflow of |x|^p
  return m * std::pow((x.array().abs() / m).pow(p).sum(), 1.0 / p);
}

Eigen::VectorXd lp_norm_gradient(const Eigen::VectorXd& x, double p) {
  const double r = lp_norm(x, p);
  if (r == 0.0) return Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::pow(std::abs(x[i]) / r, p - 1.0);
    g[i] = x[i] >= 0.0 ? a : -a;
  }
  return g;
}

LuxemburgNorm::LuxemburgNorm(OrliczFunction phi, Eigen::VectorXd weights)
    : phi_(std::move(phi)), mu_(std::move(weights)) {
  if (mu_.size() == 0 || (mu_.array() <= 0.0).any() || !mu_.allFinite()) {
    throw ValidationError("luxemburg weights must be positive and finite");
  }
}

double LuxemburgNorm::value(const Eigen::VectorXd& u) const {
  if (u.size() != mu_.size()) {
    throw ValidationError("luxemburg argument has wrong dimension");
  }
  const Eigen::VectorXd a = u.cwiseAbs();
  if (a.maxCoeff() == 0.0) return 0.0;

  const auto level = [&](double k) {
    double s = -1.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) s += mu_[i] * phi_.value(a[i] / k);
    return s;  // decreasing in k, zero at the norm
  };

  double lo = a.maxCoeff(), hi = lo;
  for (int i = 0; i < 200 && level(hi) > 0.0; ++i) hi *= 2.0;
  for (int i = 0; i < 200 && level(lo) < 0.0; ++i) lo *= 0.5;
  if (level(hi) > 0.0 || level(lo) < 0.0) {
    throw ConvergenceError("luxemburg norm bracket failed", u, level(hi), 200);
  }

  double k = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double g = level(k);
    if (std::abs(g) <= 1e-13) break;
    (g > 0.0 ? lo : hi) = k;
    double dg = 0.0;  // d level / dk
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      dg -= mu_[i] * phi_.derivative(a[i] / k) * a[i] / (k * k);
    }
    double next = dg < 0.0 ? k - g / dg : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - k) <= 1e-15 * k) {
      k = next;
      break;
    }
    k = next;
  }
  return k;
}

Eigen::VectorXd LuxemburgNorm::gradient(const Eigen::VectorXd& u) const {
  const double k = value(u);
  if (k == 0.0) throw DomainError("luxemburg norm is not differentiable at 0");
  Eigen::VectorXd g(u.size());
  double denom = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    g[i] = mu_[i] * phi_.derivative(u[i] / k);
    denom += g[i] * u[i];
  }
  if (!(denom > 0.0)) {
    throw DomainError("luxemburg gradient is degenerate at this point");
  }
  return (k / denom) * g;
}

}  // namespace bregman
