#include "bregman/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "bregman/errors.hpp"

namespace bregman {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(const PotentialSpec& spec, const Eigen::VectorXd& x,
                 const char* who) {
  if (x.size() != spec.dim) {
    throw ValidationError(std::string(who) + ": expected dimension " +
                          std::to_string(spec.dim) + ", got " +
                          std::to_string(x.size()));
  }
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// Sign factor of the alpha-power branches: +1 keeps Φ_α on ]0,1[ convex,
/// −1 flips the concave α < 0 branch back to convex.
double alpha_sign(double alpha) { return alpha > 0.0 ? 1.0 : -1.0; }

double lp_norm(const Eigen::VectorXd& x, double p) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += std::pow(std::abs(x[i]), p);
  return std::pow(acc, 1.0 / p);
}

double carrier_norm(const PotentialSpec& spec, const Eigen::VectorXd& x) {
  return spec.norm == NormKind::Euclidean ? x.norm() : lp_norm(x, spec.p);
}

double dual_exponent(double p) { return p / (p - 1.0); }

double carrier_dual_norm(const PotentialSpec& spec, const Eigen::VectorXd& y) {
  return spec.norm == NormKind::Euclidean ? y.norm()
                                          : lp_norm(y, dual_exponent(spec.p));
}

/// Gradient of the p-norm at x ≠ 0: (|xᵢ|/N)^{p−1} sign(xᵢ).
Eigen::VectorXd lp_norm_gradient(const Eigen::VectorXd& x, double p, double n) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]) / n;
    g[i] = (x[i] >= 0.0 ? 1.0 : -1.0) * std::pow(a, p - 1.0);
  }
  return g;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::NegEntropy: return "neg-entropy";
    case Family::Burg: return "burg";
    case Family::FermiDirac: return "fermi-dirac";
    case Family::GammaNorm: return "gamma-norm";
    case Family::AlphaPower: return "alpha-power";
    case Family::NormIntegral: return "norm-integral";
  }
  throw ValidationError("unknown family enum value");
}

Family family_from_name(const std::string& name) {
  if (name == "neg-entropy") return Family::NegEntropy;
  if (name == "burg") return Family::Burg;
  if (name == "fermi-dirac") return Family::FermiDirac;
  if (name == "gamma-norm") return Family::GammaNorm;
  if (name == "alpha-power") return Family::AlphaPower;
  if (name == "norm-integral") return Family::NormIntegral;
  throw ValidationError("unknown potential family '" + name + "'");
}

PotentialSpec PotentialSpec::neg_entropy(Eigen::Index n) {
  if (n < 1) throw ValidationError("dimension must be positive");
  PotentialSpec s;
  s.family = Family::NegEntropy;
  s.dim = n;
  return s;
}

PotentialSpec PotentialSpec::burg(Eigen::Index n) {
  PotentialSpec s = neg_entropy(n);
  s.family = Family::Burg;
  return s;
}

PotentialSpec PotentialSpec::fermi_dirac(Eigen::Index n) {
  PotentialSpec s = neg_entropy(n);
  s.family = Family::FermiDirac;
  return s;
}

PotentialSpec PotentialSpec::gamma_norm(Eigen::Index n, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ValidationError("gamma-norm requires gamma in ]0,1[");
  }
  PotentialSpec s = neg_entropy(n);
  s.family = Family::GammaNorm;
  s.gamma = gamma;
  return s;
}

PotentialSpec PotentialSpec::alpha_power(Eigen::Index n, double alpha) {
  if (!((alpha > 0.0 && alpha < 1.0) || alpha < 0.0)) {
    throw ValidationError("alpha-power requires alpha in ]0,1[ or alpha < 0");
  }
  PotentialSpec s = neg_entropy(n);
  s.family = Family::AlphaPower;
  s.alpha = alpha;
  return s;
}

PotentialSpec build_norm_integral_potential(
    const std::vector<std::array<double, 2>>& phi_samples, NormKind norm,
    Eigen::Index dim, double p) {
  if (dim < 1) throw ValidationError("dimension must be positive");
  if (norm == NormKind::PNorm && !(p > 1.0 && std::isfinite(p))) {
    throw ValidationError("p-norm exponent must lie in ]1,inf[");
  }
  PotentialSpec s;
  s.family = Family::NormIntegral;
  s.dim = dim;
  s.phi = MonotoneCurve::fit(phi_samples);
  s.norm = norm;
  s.p = norm == NormKind::Euclidean ? 2.0 : p;
  return s;
}

bool in_domain(const PotentialSpec& spec, const Eigen::VectorXd& x) {
  require_dim(spec, x, "in_domain");
  switch (spec.family) {
    case Family::NegEntropy: return (x.array() >= 0.0).all();
    case Family::Burg: return (x.array() > 0.0).all();
    case Family::FermiDirac:
      return (x.array() >= 0.0).all() && (x.array() <= 1.0).all();
    case Family::GammaNorm: return true;
    case Family::AlphaPower:
      return spec.alpha > 0.0 ? (x.array() >= 0.0).all()
                              : (x.array() > 0.0).all();
    case Family::NormIntegral: return true;
  }
  return false;
}

bool in_domain_interior(const PotentialSpec& spec, const Eigen::VectorXd& x) {
  require_dim(spec, x, "in_domain_interior");
  switch (spec.family) {
    case Family::NegEntropy:
    case Family::Burg:
      return (x.array() > 0.0).all();
    case Family::FermiDirac:
      return (x.array() > 0.0).all() && (x.array() < 1.0).all();
    case Family::GammaNorm: return true;
    case Family::AlphaPower: return (x.array() > 0.0).all();
    case Family::NormIntegral: return true;
  }
  return false;
}

bool in_conjugate_domain_interior(const PotentialSpec& spec,
                                  const Eigen::VectorXd& y) {
  require_dim(spec, y, "in_conjugate_domain_interior");
  switch (spec.family) {
    case Family::NegEntropy:
    case Family::FermiDirac:
    case Family::GammaNorm:
    case Family::NormIntegral:
      return true;
    case Family::Burg:
    case Family::AlphaPower:
      return (y.array() < 0.0).all();
  }
  return false;
}

bool has_boundary(const PotentialSpec& spec) {
  return spec.family != Family::GammaNorm &&
         spec.family != Family::NormIntegral;
}

DomainBox domain_box(const PotentialSpec& spec) {
  DomainBox box;
  box.lo = Eigen::VectorXd::Constant(spec.dim, -kInf);
  box.hi = Eigen::VectorXd::Constant(spec.dim, kInf);
  switch (spec.family) {
    case Family::NegEntropy:
    case Family::Burg:
    case Family::AlphaPower:
      box.lo.setZero();
      break;
    case Family::FermiDirac:
      box.lo.setZero();
      box.hi.setOnes();
      break;
    default:
      break;
  }
  return box;
}

ExtendedReal eval_potential(const PotentialSpec& spec, const Eigen::VectorXd& x) {
  require_dim(spec, x, "eval_potential");
  if (!in_domain(spec, x)) return ExtendedReal::infinity();
  switch (spec.family) {
    case Family::NegEntropy: {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) acc += xlogx(x[i]) - x[i];
      return acc;
    }
    case Family::Burg:
      return -x.array().log().sum();
    case Family::FermiDirac: {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        acc += xlogx(x[i]) + xlogx(1.0 - x[i]);
      }
      return acc;
    }
    case Family::GammaNorm: {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        acc += std::pow(std::abs(x[i]), 1.0 / spec.gamma);
      }
      return spec.gamma * acc;
    }
    case Family::AlphaPower: {
      const double s = alpha_sign(spec.alpha);
      double acc = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        acc += std::pow(x[i], spec.alpha) - 1.0;
      }
      return s / (spec.alpha - 1.0) * acc;
    }
    case Family::NormIntegral:
      return spec.phi.integral(carrier_norm(spec, x));
  }
  return ExtendedReal::infinity();
}

Eigen::VectorXd grad_potential(const PotentialSpec& spec,
                               const Eigen::VectorXd& x) {
  require_dim(spec, x, "grad_potential");
  if (!in_domain_interior(spec, x)) {
    throw DomainError("gradient undefined outside the domain interior");
  }
  switch (spec.family) {
    case Family::NegEntropy:
      return x.array().log();
    case Family::Burg:
      return -x.array().inverse();
    case Family::FermiDirac:
      return (x.array() / (1.0 - x.array())).log();
    case Family::GammaNorm: {
      Eigen::VectorXd g(x.size());
      const double e = 1.0 / spec.gamma - 1.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        g[i] = (x[i] >= 0.0 ? 1.0 : -1.0) * std::pow(std::abs(x[i]), e);
      }
      return g;
    }
    case Family::AlphaPower: {
      const double c = alpha_sign(spec.alpha) * spec.alpha / (spec.alpha - 1.0);
      return c * x.array().pow(spec.alpha - 1.0);
    }
    case Family::NormIntegral: {
      const double r = carrier_norm(spec, x);
      if (r == 0.0) return Eigen::VectorXd::Zero(x.size());
      if (spec.norm == NormKind::Euclidean) {
        return (spec.phi(r) / r) * x;
      }
      return spec.phi(r) * lp_norm_gradient(x, spec.p, r);
    }
  }
  throw ValidationError("unknown family");
}

Eigen::MatrixXd hess_potential(const PotentialSpec& spec,
                               const Eigen::VectorXd& x) {
  require_dim(spec, x, "hess_potential");
  if (!in_domain_interior(spec, x)) {
    throw DomainError("Hessian undefined outside the domain interior");
  }
  const Eigen::Index n = x.size();
  auto diag = [&](const std::function<double(double)>& h) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = h(x[i]);
      if (!std::isfinite(v) || v <= 0.0) {
        throw DomainError("Hessian degenerate at a fractional-power kink");
      }
      m(i, i) = v;
    }
    return m;
  };
  switch (spec.family) {
    case Family::NegEntropy:
      return diag([](double t) { return 1.0 / t; });
    case Family::Burg:
      return diag([](double t) { return 1.0 / (t * t); });
    case Family::FermiDirac:
      return diag([](double t) { return 1.0 / (t * (1.0 - t)); });
    case Family::GammaNorm: {
      const double c = 1.0 / spec.gamma - 1.0;
      const double e = 1.0 / spec.gamma - 2.0;
      return diag([&](double t) { return c * std::pow(std::abs(t), e); });
    }
    case Family::AlphaPower: {
      const double a = std::abs(spec.alpha);
      return diag([&](double t) { return a * std::pow(t, spec.alpha - 2.0); });
    }
    case Family::NormIntegral: {
      const double r = carrier_norm(spec, x);
      if (r == 0.0) {
        if (spec.norm != NormKind::Euclidean) {
          throw DomainError("p-norm Hessian undefined at the origin");
        }
        const double d0 = spec.phi.derivative(0.0);
        if (d0 <= 0.0) throw DomainError("Hessian degenerate at the origin");
        return d0 * Eigen::MatrixXd::Identity(n, n);
      }
      if (spec.norm == NormKind::Euclidean) {
        const Eigen::VectorXd u = x / r;
        const Eigen::MatrixXd pr = u * u.transpose();
        return (spec.phi(r) / r) * (Eigen::MatrixXd::Identity(n, n) - pr) +
               spec.phi.derivative(r) * pr;
      }
      if (spec.p < 2.0 && (x.array().abs() < 1e-14).any()) {
        throw DomainError("p-norm Hessian blows up on a zero coordinate");
      }
      const Eigen::VectorXd g = lp_norm_gradient(x, spec.p, r);
      Eigen::MatrixXd curv = -g * g.transpose();
      for (Eigen::Index i = 0; i < n; ++i) {
        curv(i, i) += std::pow(std::abs(x[i]) / r, spec.p - 2.0);
      }
      return spec.phi.derivative(r) * (g * g.transpose()) +
             spec.phi(r) * (spec.p - 1.0) / r * curv;
    }
  }
  throw ValidationError("unknown family");
}

bool has_separable_third_derivative(const PotentialSpec& spec) {
  return spec.family != Family::NormIntegral;
}

Eigen::VectorXd third_derivative_diag(const PotentialSpec& spec,
                                      const Eigen::VectorXd& x) {
  require_dim(spec, x, "third_derivative_diag");
  if (!has_separable_third_derivative(spec)) {
    throw ValidationError("third derivative diagonal: family not separable");
  }
  if (!in_domain_interior(spec, x)) {
    throw DomainError("third derivative undefined outside the interior");
  }
  Eigen::VectorXd t(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x[i];
    switch (spec.family) {
      case Family::NegEntropy: t[i] = -1.0 / (v * v); break;
      case Family::Burg: t[i] = -2.0 / (v * v * v); break;
      case Family::FermiDirac:
        t[i] = -1.0 / (v * v) + 1.0 / ((1.0 - v) * (1.0 - v));
        break;
      case Family::GammaNorm: {
        const double c = 1.0 / spec.gamma - 1.0;
        const double e = 1.0 / spec.gamma - 2.0;
        t[i] = c * e * std::pow(std::abs(v), e - 1.0) * (v >= 0.0 ? 1.0 : -1.0);
        break;
      }
      case Family::AlphaPower:
        t[i] = std::abs(spec.alpha) * (spec.alpha - 2.0) *
               std::pow(v, spec.alpha - 3.0);
        break;
      default:
        throw ValidationError("unreachable");
    }
    if (!std::isfinite(t[i])) {
      throw DomainError("third derivative blows up at a kink");
    }
  }
  return t;
}

ExtendedReal fenchel_conjugate(const PotentialSpec& spec,
                               const Eigen::VectorXd& y) {
  require_dim(spec, y, "fenchel_conjugate");
  switch (spec.family) {
    case Family::NegEntropy:
      return y.array().exp().sum();
    case Family::Burg: {
      if (!(y.array() < 0.0).all()) return ExtendedReal::infinity();
      double acc = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        acc += -1.0 - std::log(-y[i]);
      }
      return acc;
    }
    case Family::FermiDirac: {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        // log(1 + e^y) evaluated without overflow on either tail
        acc += y[i] > 0.0 ? y[i] + std::log1p(std::exp(-y[i]))
                          : std::log1p(std::exp(y[i]));
      }
      return acc;
    }
    case Family::GammaNorm: {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        acc += std::pow(std::abs(y[i]), 1.0 / (1.0 - spec.gamma));
      }
      return (1.0 - spec.gamma) * acc;
    }
    case Family::AlphaPower: {
      const double a = spec.alpha;
      const double e = a / (a - 1.0);
      if (a > 0.0) {
        if (!(y.array() < 0.0).all()) return ExtendedReal::infinity();
        double acc = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
          acc += std::pow((a - 1.0) * y[i] / a, e) + 1.0 / (a - 1.0);
        }
        return acc;
      }
      if (!(y.array() <= 0.0).all()) return ExtendedReal::infinity();
      double acc = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        acc += 1.0 / (1.0 - a) - std::pow((1.0 - a) * y[i] / a, e);
      }
      return acc;
    }
    case Family::NormIntegral: {
      const double w = carrier_dual_norm(spec, y);
      const double r = spec.phi.inverse(w);
      return r * w - spec.phi.integral(r);
    }
  }
  throw ValidationError("unknown family");
}

Eigen::VectorXd grad_conjugate(const PotentialSpec& spec,
                               const Eigen::VectorXd& y) {
  require_dim(spec, y, "grad_conjugate");
  if (!in_conjugate_domain_interior(spec, y)) {
    throw DomainError("conjugate gradient undefined: y outside int efd of the dual");
  }
  switch (spec.family) {
    case Family::NegEntropy:
      return y.array().exp();
    case Family::Burg:
      return -y.array().inverse();
    case Family::FermiDirac:
      return (1.0 + (-y.array()).exp()).inverse();
    case Family::GammaNorm: {
      Eigen::VectorXd x(y.size());
      const double e = spec.gamma / (1.0 - spec.gamma);
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        x[i] = (y[i] >= 0.0 ? 1.0 : -1.0) * std::pow(std::abs(y[i]), e);
      }
      return x;
    }
    case Family::AlphaPower: {
      const double a = spec.alpha;
      const double s = alpha_sign(a);
      return (s * (a - 1.0) / a * y.array()).pow(1.0 / (a - 1.0));
    }
    case Family::NormIntegral: {
      const double w = carrier_dual_norm(spec, y);
      if (w == 0.0) return Eigen::VectorXd::Zero(y.size());
      const double r = spec.phi.inverse(w);
      if (spec.norm == NormKind::Euclidean) return (r / w) * y;
      return r * lp_norm_gradient(y, dual_exponent(spec.p), w);
    }
  }
  throw ValidationError("unknown family");
}

namespace {

/// 1-D coordinate function of a separable family: value, derivative, open
/// domain interval.  Drives the numeric conjugate.
struct Coord1D {
  std::function<double(double)> f, fp;
  double lo, hi;
};

Coord1D coord_function(const PotentialSpec& spec) {
  switch (spec.family) {
    case Family::NegEntropy:
      return {[](double t) { return xlogx(t) - t; },
              [](double t) { return std::log(t); }, 0.0, kInf};
    case Family::Burg:
      return {[](double t) { return -std::log(t); },
              [](double t) { return -1.0 / t; }, 0.0, kInf};
    case Family::FermiDirac:
      return {[](double t) { return xlogx(t) + xlogx(1.0 - t); },
              [](double t) { return std::log(t / (1.0 - t)); }, 0.0, 1.0};
    case Family::GammaNorm: {
      const double g = spec.gamma;
      return {[g](double t) { return g * std::pow(std::abs(t), 1.0 / g); },
              [g](double t) {
                return (t >= 0.0 ? 1.0 : -1.0) *
                       std::pow(std::abs(t), 1.0 / g - 1.0);
              },
              -kInf, kInf};
    }
    case Family::AlphaPower: {
      const double a = spec.alpha;
      const double s = alpha_sign(a);
      return {[a, s](double t) {
                return s / (a - 1.0) * (std::pow(t, a) - 1.0);
              },
              [a, s](double t) {
                return s * a / (a - 1.0) * std::pow(t, a - 1.0);
              },
              0.0, kInf};
    }
    default:
      throw ValidationError("coordinate function: family not separable");
  }
}

/// Maximizes t·y − f(t) over ]lo,hi[ for convex f with increasing derivative
/// fp: brackets the stationarity root fp(t) = y, then runs Newton steps with
/// a finite-difference slope, falling back to bisection whenever a step
/// leaves the bracket.  Returns +inf when y is outside the slope range.
double conjugate_1d(const Coord1D& c, double y, double tol) {
  double a = std::isfinite(c.lo) ? c.lo : -1.0;
  double b = std::isfinite(c.hi) ? c.hi : 1.0;
  // move strictly inside, then expand toward whichever end is unbounded
  const double inner = std::isfinite(c.lo) && std::isfinite(c.hi)
                           ? 1e-14 * (c.hi - c.lo)
                           : 1e-14;
  if (std::isfinite(c.lo)) a = c.lo + inner;
  if (std::isfinite(c.hi)) b = c.hi - inner;
  for (int k = 0; k < 2000 && c.fp(a) >= y; ++k) {
    a = std::isfinite(c.lo) ? c.lo + (a - c.lo) * 0.5 : (a < 0.0 ? a * 2.0 : -1.0);
  }
  for (int k = 0; k < 2000 && c.fp(b) <= y; ++k) {
    b = std::isfinite(c.hi) ? c.hi - (c.hi - b) * 0.5 : (b > 0.0 ? b * 2.0 : 1.0);
  }
  if (c.fp(a) >= y || c.fp(b) <= y) return kInf;
  double t = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double r = c.fp(t) - y;
    if (std::abs(r) <= tol * (1.0 + std::abs(y))) break;
    (r > 0.0 ? b : a) = t;
    const double h = 1e-7 * (1.0 + std::abs(t));
    const double slope = (c.fp(t + h) - c.fp(t - h)) / (2.0 * h);
    double next = slope > 0.0 ? t - r / slope : t;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    t = next;
  }
  return t * y - c.f(t);
}

}  // namespace

ExtendedReal fenchel_conjugate_numeric(const PotentialSpec& spec,
                                       const Eigen::VectorXd& y, double tol) {
  require_dim(spec, y, "fenchel_conjugate_numeric");
  if (spec.family == Family::NormIntegral) {
    // radial reduction: sup_r { r·‖y‖_* − ∫₀^r φ }, stationary at φ(r) = ‖y‖_*
    const double w = carrier_dual_norm(spec, y);
    double lo = 0.0, hi = 1.0;
    while (spec.phi(hi) < w) hi *= 2.0;
    double r = 0.5 * hi;
    for (int it = 0; it < 200; ++it) {
      const double res = spec.phi(r) - w;
      if (std::abs(res) <= tol * (1.0 + w)) break;
      (res > 0.0 ? hi : lo) = r;
      const double d = spec.phi.derivative(r);
      double next = d > 0.0 ? r - res / d : r;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      r = next;
    }
    return r * w - spec.phi.integral(r);
  }
  const Coord1D c = coord_function(spec);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double v = conjugate_1d(c, y[i], tol);
    if (!std::isfinite(v)) return ExtendedReal::infinity();
    acc += v;
  }
  return acc;
}

ExtendedReal biconjugate_numeric(const PotentialSpec& spec,
                                 const Eigen::VectorXd& x, double tol) {
  require_dim(spec, x, "biconjugate_numeric");
  if (spec.family == Family::NormIntegral) {
    // Φ* is again a norm integral (radial profile φ⁻¹ of the dual norm), so
    // the biconjugate reduces radially as well: sup_w { w‖x‖ − Φ*_rad(w) }.
    const double r = carrier_norm(spec, x);
    if (r == 0.0) return 0.0;
    Coord1D c;
    c.lo = 0.0;
    c.hi = kInf;
    c.f = [&spec](double w) {
      const double t = spec.phi.inverse(w);
      return t * w - spec.phi.integral(t);
    };
    c.fp = [&spec](double w) { return spec.phi.inverse(w); };
    const double v = conjugate_1d(c, r, tol);
    return std::isfinite(v) ? ExtendedReal(v) : ExtendedReal::infinity();
  }
  // coordinate functions of Φ*: value via the closed form on a 1-vector,
  // derivative via grad_conjugate on the same
  PotentialSpec one = spec;
  one.dim = 1;
  Coord1D c;
  switch (spec.family) {
    case Family::NegEntropy:
    case Family::FermiDirac:
    case Family::GammaNorm:
      c.lo = -kInf;
      c.hi = kInf;
      break;
    case Family::Burg:
    case Family::AlphaPower:
      c.lo = -kInf;
      c.hi = 0.0;
      break;
    default:
      throw ValidationError("unreachable");
  }
  c.f = [one](double t) {
    return fenchel_conjugate(one, Eigen::VectorXd::Constant(1, t)).value();
  };
  c.fp = [one](double t) {
    return grad_conjugate(one, Eigen::VectorXd::Constant(1, t))[0];
  };
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = conjugate_1d(c, x[i], tol);
    if (!std::isfinite(v)) return ExtendedReal::infinity();
    acc += v;
  }
  return acc;
}

Eigen::VectorXd sample_interior(const PotentialSpec& spec, Rng& rng) {
  Eigen::VectorXd x(spec.dim);
  switch (spec.family) {
    case Family::NegEntropy:
    case Family::Burg:
    case Family::AlphaPower:
      for (Eigen::Index i = 0; i < spec.dim; ++i) x[i] = rng.uniform(0.2, 3.0);
      return x;
    case Family::FermiDirac:
      for (Eigen::Index i = 0; i < spec.dim; ++i) x[i] = rng.uniform(0.1, 0.9);
      return x;
    case Family::GammaNorm:
    case Family::NormIntegral: {
      // keep coordinates away from the fractional-power kinks at zero and,
      // for the radial family, the whole vector away from the origin
      const bool kink_free =
          (spec.family == Family::GammaNorm && spec.gamma != 0.5) ||
          (spec.family == Family::NormIntegral && spec.p != 2.0);
      do {
        for (Eigen::Index i = 0; i < spec.dim; ++i) {
          do {
            x[i] = rng.uniform(-2.0, 2.0);
          } while (kink_free && std::abs(x[i]) < 0.1);
        }
      } while (spec.family == Family::NormIntegral && x.norm() < 0.1);
      return x;
    }
  }
  throw ValidationError("unknown family");
}

namespace {

/// Pins a random nonempty coordinate subset of an interior point to the
/// domain boundary (0, or 1 on the upper Fermi-Dirac facet).
Eigen::VectorXd pin_to_boundary(const PotentialSpec& spec,
                                const Eigen::VectorXd& x, Rng& rng) {
  Eigen::VectorXd b = x;
  const Eigen::Index pinned = rng.uniform_int(0, static_cast<int>(spec.dim) - 1);
  for (Eigen::Index i = 0; i < spec.dim; ++i) {
    if (i != pinned && rng.uniform() < 0.5) continue;
    b[i] = spec.family == Family::FermiDirac && rng.uniform() < 0.5 ? 1.0 : 0.0;
  }
  return b;
}

}  // namespace

Eigen::VectorXd sample_boundary(const PotentialSpec& spec, Rng& rng) {
  if (!has_boundary(spec)) {
    throw DomainError("family has full domain, no boundary to sample");
  }
  return pin_to_boundary(spec, sample_interior(spec, rng), rng);
}

LegendreReport check_euler_legendre(const PotentialSpec& spec, int n_samples,
                                    std::uint64_t seed,
                                    const LegendreOptions& options) {
  if (n_samples < 1) throw ValidationError("need at least one sample");
  Rng rng(seed);
  LegendreReport report;

  for (int k = 0; k < n_samples; ++k) {
    const Eigen::VectorXd x = sample_interior(spec, rng);
    const Eigen::VectorXd y = grad_potential(spec, x);
    const Eigen::VectorXd back = grad_conjugate(spec, y);
    const Eigen::VectorXd dual = grad_potential(spec, grad_conjugate(spec, y));
    report.roundtrip_residual =
        std::max({report.roundtrip_residual,
                  (back - x).lpNorm<Eigen::Infinity>(),
                  (dual - y).lpNorm<Eigen::Infinity>()});
  }
  report.roundtrip_pass = report.roundtrip_residual <= options.roundtrip_tol;

  report.boundary_pass = true;
  if (has_boundary(spec)) {
    const int probes = std::min(options.boundary_probes, n_samples);
    for (int k = 0; k < probes; ++k) {
      BoundaryProbe probe;
      probe.interior = sample_interior(spec, rng);
      // pin a subset of the same point so the segment moves only in the
      // coordinates that actually approach the boundary
      probe.boundary = pin_to_boundary(spec, probe.interior, rng);
      const Eigen::VectorXd dir = probe.interior - probe.boundary;
      const double len = dir.norm();
      if (len < 1e-12) continue;
      for (const double t : options.schedule) {
        const Eigen::VectorXd pt = probe.boundary + t * dir;
        probe.slopes.push_back(grad_potential(spec, pt).dot(dir) / len);
      }
      probe.decreasing = true;
      for (std::size_t i = 1; i < probe.slopes.size(); ++i) {
        probe.decreasing &= probe.slopes[i] < probe.slopes[i - 1];
      }
      const double first = probe.slopes.front(), last = probe.slopes.back();
      probe.deep = last <= options.slope_threshold ||
                   (first < 0.0 && last <= options.slope_growth * first);
      report.boundary_pass &= probe.decreasing && probe.deep;
      report.probes.push_back(std::move(probe));
    }
  }
  report.pass = report.roundtrip_pass && report.boundary_pass;
  return report;
}

}  // namespace bregman
