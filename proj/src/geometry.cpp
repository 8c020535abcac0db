#include "bregman/geometry.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <utility>

#include "bregman/divergence.hpp"
#include "bregman/errors.hpp"
#include "bregman/extended_real.hpp"
#include "bregman/rng.hpp"

namespace bregman {
namespace {

double fd_step(double coord) {
  return kGeometryFdScale * (1.0 + std::abs(coord));
}

// Central differences with one Richardson step (combining h and 2h); the
// only derivative rules in this translation unit.
template <typename F>
double diff1(const F& f, double h) {
  const double a1 = (f(h) - f(-h)) / (2.0 * h);
  const double a2 = (f(2.0 * h) - f(-2.0 * h)) / (4.0 * h);
  return (4.0 * a1 - a2) / 3.0;
}

template <typename F>
double diff2(const F& f, double h) {
  const double f0 = f(0.0);
  const double a1 = (f(h) - 2.0 * f0 + f(-h)) / (h * h);
  const double a2 = (f(2.0 * h) - 2.0 * f0 + f(-2.0 * h)) / (4.0 * h * h);
  return (4.0 * a1 - a2) / 3.0;
}

template <typename F>
double diff11(const F& f, double hs, double ht) {
  const auto cross = [&](double c) {
    return (f(c * hs, c * ht) - f(c * hs, -c * ht) - f(-c * hs, c * ht) +
            f(-c * hs, -c * ht)) /
           (4.0 * c * c * hs * ht);
  };
  return (4.0 * cross(1.0) - cross(2.0)) / 3.0;
}

// Γ_ijk = −∂ᵢ∂ⱼ|_{u=p} ∂ₖ|_{v=p} D(u, v). The dual coefficients are this
// same rule applied to the swapped field (the two partials act on different
// slots, so their order is immaterial); keeping a single code path makes
// the swap duality of connection pairs exact rather than approximate.
Tensor3 primal_connection(const DivergenceField& d, const Eigen::VectorXd& p) {
  const Eigen::Index n = d.dim();
  Tensor3 gamma(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double hk = fd_step(p[k]);
    const auto first_slope = [&](const Eigen::VectorXd& u) {
      return diff1(
          [&](double t) {
            Eigen::VectorXd v = p;
            v[k] += t;
            return d(u, v);
          },
          hk);
    };
    for (Eigen::Index i = 0; i < n; ++i) {
      const double hi = fd_step(p[i]);
      gamma(i, i, k) = -diff2(
          [&](double s) {
            Eigen::VectorXd u = p;
            u[i] += s;
            return first_slope(u);
          },
          hi);
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double v = diff11(
            [&](double s, double t) {
              Eigen::VectorXd u = p;
              u[i] += s;
              u[j] += t;
              return first_slope(u);
            },
            hi, fd_step(p[j]));
        gamma(i, j, k) = -v;
        gamma(j, i, k) = -v;
      }
    }
  }
  return gamma;
}

void require_point(const Eigen::VectorXd& p, const DivergenceField& d) {
  if (p.size() != d.dim())
    throw ValidationError("geometry point has the wrong dimension");
}

}  // namespace

DivergenceField::DivergenceField(Fn d, Eigen::Index dim, int smoothness_order)
    : d_(std::move(d)), dim_(dim), order_(smoothness_order) {
  if (!d_) throw ValidationError("divergence field needs a callable");
  if (dim_ < 1)
    throw ValidationError("divergence field needs a positive dimension");
  if (order_ < 3)
    throw ValidationError(
        "geometry extraction needs smoothness of order at least 3");
}

double DivergenceField::operator()(const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& v) const {
  if (u.size() != dim_ || v.size() != dim_)
    throw ValidationError("divergence field arguments have the wrong dimension");
  return d_(u, v);
}

double DivergenceField::diagonal_residual(const Eigen::VectorXd& p) const {
  require_point(p, *this);
  double worst = std::abs((*this)(p, p));
  for (Eigen::Index i = 0; i < dim_; ++i) {
    const double slope = diff1(
        [&](double t) {
          Eigen::VectorXd u = p;
          u[i] += t;
          return (*this)(u, p);
        },
        fd_step(p[i]));
    worst = std::max(worst, std::abs(slope));
  }
  return worst;
}

DivergenceField DivergenceField::swapped() const {
  Fn inner = d_;
  return DivergenceField(
      [inner](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
        return inner(v, u);
      },
      dim_, order_);
}

PotentialChart chart_of(const PotentialSpec& spec) {
  PotentialChart chart;
  chart.dim = spec.dim;
  chart.value = [spec](const Eigen::VectorXd& x) {
    const ExtendedReal v = eval_potential(spec, x);
    if (!v.is_finite())
      throw DomainError("potential probed outside its domain");
    return v.value();
  };
  chart.gradient = [spec](const Eigen::VectorXd& x) {
    return grad_potential(spec, x);
  };
  chart.dual_gradient = [spec](const Eigen::VectorXd& y) {
    return grad_conjugate(spec, y);
  };
  chart.interior = [spec](const Eigen::VectorXd& x) {
    return in_domain_interior(spec, x);
  };
  return chart;
}

PotentialChart sum_exp_chart(Eigen::Index n) {
  if (n < 1) throw ValidationError("sum-exp chart needs a positive dimension");
  PotentialChart chart;
  chart.dim = n;
  chart.value = [](const Eigen::VectorXd& x) { return x.array().exp().sum(); };
  chart.gradient = [](const Eigen::VectorXd& x) {
    return x.array().exp().matrix().eval();
  };
  chart.dual_gradient = [](const Eigen::VectorXd& y) {
    if (y.size() == 0 || y.minCoeff() <= 0.0)
      throw DomainError("sum-exp dual coordinates must be positive");
    return y.array().log().matrix().eval();
  };
  chart.interior = [n](const Eigen::VectorXd& x) { return x.size() == n; };
  return chart;
}

DivergenceField bregman_field(const PotentialSpec& spec) {
  return DivergenceField(
      [spec](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
        const ExtendedReal r = bregman_div(spec, u, v);
        if (!r.is_finite())
          throw DomainError("divergence field probed outside its patch");
        return r.value();
      },
      spec.dim);
}

DivergenceField bregman_field(const PotentialChart& chart) {
  if (chart.dim < 1 || !chart.value || !chart.gradient)
    throw ValidationError("potential chart is missing its calculus");
  return DivergenceField(
      [chart](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
        if (chart.interior && (!chart.interior(u) || !chart.interior(v)))
          throw DomainError("divergence field probed outside its patch");
        return chart.value(u) - chart.value(v) - (u - v).dot(chart.gradient(v));
      },
      chart.dim);
}

double Tensor3::max_abs() const {
  double worst = 0.0;
  for (double v : data_) worst = std::max(worst, std::abs(v));
  return worst;
}

Eigen::MatrixXd metric_from_divergence(const DivergenceField& d,
                                       const Eigen::VectorXd& p) {
  require_point(p, d);
  const Eigen::Index n = d.dim();
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double hi = fd_step(p[i]);
    g(i, i) = diff2(
        [&](double s) {
          Eigen::VectorXd u = p;
          u[i] += s;
          return d(u, p);
        },
        hi);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = diff11(
          [&](double s, double t) {
            Eigen::VectorXd u = p;
            u[i] += s;
            u[j] += t;
            return d(u, p);
          },
          hi, fd_step(p[j]));
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      g, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= kDegenerateMetricFloor)
    throw DomainError("the induced metric degenerates at this point");
  return g;
}

std::pair<Tensor3, Tensor3> connections_from_divergence(
    const DivergenceField& d, const Eigen::VectorXd& p) {
  require_point(p, d);
  return {primal_connection(d, p), primal_connection(d.swapped(), p)};
}

double norden_sen_check(const DivergenceField& d, const Eigen::VectorXd& p,
                        int trials) {
  require_point(p, d);
  if (trials < 1)
    throw ValidationError("norden-sen check needs at least one trial");
  const Eigen::Index n = d.dim();
  const auto [gamma, gamma_dual] = connections_from_divergence(d, p);
  // ∂ᵢ g_jk, filled lazily per first index (one metric sweep covers all j, k).
  std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(n));
  const auto slope_of_metric = [&](Eigen::Index i) {
    const double hi = fd_step(p[i]);
    const auto at = [&](double s) {
      Eigen::VectorXd q = p;
      q[i] += s;
      return metric_from_divergence(d, q);
    };
    const Eigen::MatrixXd a1 = (at(hi) - at(-hi)) / (2.0 * hi);
    const Eigen::MatrixXd a2 = (at(2.0 * hi) - at(-2.0 * hi)) / (4.0 * hi);
    return ((4.0 * a1 - a2) / 3.0).eval();
  };
  Rng rng(11);
  const int hi = static_cast<int>(n) - 1;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto i = static_cast<Eigen::Index>(rng.uniform_int(0, hi));
    const auto j = static_cast<Eigen::Index>(rng.uniform_int(0, hi));
    const auto k = static_cast<Eigen::Index>(rng.uniform_int(0, hi));
    auto& slab = dg[static_cast<std::size_t>(i)];
    if (slab.size() == 0) slab = slope_of_metric(i);
    worst = std::max(
        worst, std::abs(slab(j, k) - gamma(i, j, k) - gamma_dual(i, k, j)));
  }
  return worst;
}

Eigen::VectorXd dual_coordinates(const PotentialChart& chart,
                                 const Eigen::VectorXd& theta) {
  if (chart.dim < 1 || !chart.gradient || !chart.dual_gradient)
    throw ValidationError("potential chart is missing its calculus");
  if (theta.size() != chart.dim)
    throw ValidationError("primal point has the wrong dimension");
  if (chart.interior && !chart.interior(theta))
    throw DomainError("dual coordinates need an interior primal point");
  const Eigen::VectorXd eta = chart.gradient(theta);
  const Eigen::VectorXd back = chart.dual_gradient(eta);
  const double gap = (back - theta).cwiseAbs().maxCoeff();
  if (gap > 1e-8 * (1.0 + theta.cwiseAbs().maxCoeff()))
    throw ConvergenceError(
        "dual coordinates failed to round-trip through the conjugate gradient",
        back, gap, 0);
  return eta;
}

Eigen::VectorXd dual_coordinates(const PotentialSpec& spec,
                                 const Eigen::VectorXd& theta) {
  return dual_coordinates(chart_of(spec), theta);
}

FlatnessReport flatness_check(const PotentialChart& chart,
                              const std::vector<Eigen::VectorXd>& points) {
  if (points.empty())
    throw ValidationError("flatness check needs at least one patch point");
  const DivergenceField theta_field = bregman_field(chart);
  // The same divergence pushed to the dual chart: probed at η, pulled back
  // through ∇Ψ* before evaluation.
  const DivergenceField eta_field(
      [chart](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        const Eigen::VectorXd u = chart.dual_gradient(a);
        const Eigen::VectorXd v = chart.dual_gradient(b);
        return chart.value(u) - chart.value(v) - (u - v).dot(chart.gradient(v));
      },
      chart.dim);
  FlatnessReport report;
  for (const Eigen::VectorXd& p : points) {
    const auto primal = connections_from_divergence(theta_field, p);
    report.theta_residual =
        std::max(report.theta_residual, primal.first.max_abs());
    const Eigen::VectorXd eta = dual_coordinates(chart, p);
    const auto dual = connections_from_divergence(eta_field, eta);
    report.eta_residual =
        std::max(report.eta_residual, dual.second.max_abs());
  }
  return report;
}

FlatnessReport flatness_check(const PotentialSpec& spec,
                              const std::vector<Eigen::VectorXd>& points) {
  return flatness_check(chart_of(spec), points);
}

double orthogonality_check(const PotentialSpec& spec, const ConstraintSet& set,
                           const Eigen::VectorXd& y,
                           const SolveOptions& options) {
  if (set.ambient_dim() != spec.dim || y.size() != spec.dim)
    throw ValidationError("orthogonality check needs matching dimensions");
  if (set.kind() != ConstraintSet::Kind::Affine)
    throw ValidationError(
        "orthogonality is a statement about affine sets; for other sets "
        "compare projection values instead");
  const ProjectionResult pr = left_project(spec, set, y, options);
  const Eigen::VectorXd deta =
      grad_potential(spec, pr.point) - grad_potential(spec, y);
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(set.eq_matrix());
  if (lu.dimensionOfKernel() == 0) return 0.0;  // singleton: nothing tangent
  const Eigen::MatrixXd tangents = lu.kernel();
  const Eigen::MatrixXd h = hess_potential(spec, pr.point);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
  const double chord = std::sqrt(deta.dot(ldlt.solve(deta)));
  if (!(chord > 0.0)) return 0.0;  // y was already in the set
  double worst = 0.0;
  for (Eigen::Index m = 0; m < tangents.cols(); ++m) {
    const Eigen::VectorXd t = tangents.col(m);
    const double scale = chord * std::sqrt(t.dot(h * t));
    worst = std::max(worst, std::abs(deta.dot(t)) / scale);
  }
  return worst;
}

GeometryReport geometry_report(const PotentialSpec& spec,
                               const Eigen::VectorXd& p, int trials) {
  const DivergenceField d = bregman_field(spec);
  GeometryReport report;
  report.point = p;
  report.metric = metric_from_divergence(d, p);
  auto pair = connections_from_divergence(d, p);
  report.gamma = std::move(pair.first);
  report.gamma_dual = std::move(pair.second);
  report.norden_sen_residual = norden_sen_check(d, p, trials);
  const FlatnessReport flatness = flatness_check(spec, {p});
  report.flatness_residual =
      std::max(flatness.theta_residual, flatness.eta_residual);
  return report;
}

}  // namespace bregman
