#include "bregman/projection.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "bregman/divergence.hpp"
#include "bregman/errors.hpp"

namespace bregman {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double softplus(double beta, double m) {
  const double t = beta * m;
  if (t > 30.0) return m;
  return std::log1p(std::exp(t)) / beta;
}

// ---------------------------------------------------------------------------
// Feasibility certificate.  Rows R x ≤ r collect the set's inequalities plus
// the potential's finite domain walls pushed in by a small margin; a point
// with all margins strictly negative certifies that the problem has a usable
// interior.  The search runs in the null space of the equality rows and
// smooths max(margin, 0) with a softplus whose sharpness is ramped up.
// ---------------------------------------------------------------------------

struct StrictRows {
  Eigen::MatrixXd rows;  // one row per inequality, empty when vacuous
  Eigen::VectorXd rhs;
};

StrictRows strict_rows(const PotentialSpec& spec, const ConstraintSet& set) {
  const Eigen::Index n = set.ambient_dim();
  const DomainBox box = domain_box(spec);
  constexpr double kWallMargin = 1e-6;
  std::vector<std::pair<Eigen::VectorXd, double>> rows;
  for (Eigen::Index i = 0; i < set.ineq_matrix().rows(); ++i) {
    rows.emplace_back(set.ineq_matrix().row(i).transpose(), set.ineq_rhs()(i));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isfinite(box.lo[i])) {
      rows.emplace_back(-Eigen::VectorXd::Unit(n, i), -(box.lo[i] + kWallMargin));
    }
    if (std::isfinite(box.hi[i])) {
      rows.emplace_back(Eigen::VectorXd::Unit(n, i), box.hi[i] - kWallMargin);
    }
  }
  StrictRows out;
  out.rows.resize(static_cast<Eigen::Index>(rows.size()), n);
  out.rhs.resize(static_cast<Eigen::Index>(rows.size()));
  for (Eigen::Index i = 0; i < out.rows.rows(); ++i) {
    out.rows.row(i) = rows[static_cast<std::size_t>(i)].first.transpose();
    out.rhs(i) = rows[static_cast<std::size_t>(i)].second;
  }
  return out;
}

void require_feasible(const PotentialSpec& spec, const ConstraintSet& set) {
  const Eigen::Index n = set.ambient_dim();
  const DomainBox box = domain_box(spec);

  if (set.kind() == ConstraintSet::Kind::Box) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (set.box_lo()[i] > box.hi[i] || set.box_hi()[i] < box.lo[i]) {
        throw ValidationError("box does not meet the potential domain");
      }
    }
  }
  if (set.kind() == ConstraintSet::Kind::Simplex && set.simplex_mass() <= 0.0) {
    throw ValidationError("simplex mass must be positive");
  }

  const StrictRows sr = strict_rows(spec, set);
  if (sr.rows.rows() == 0) return;  // consistent equalities over a full domain

  // Particular solution of the equalities and a null-space basis.
  const Eigen::MatrixXd& a = set.eq_matrix();
  Eigen::VectorXd xp = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
  if (a.rows() > 0) {
    xp = a.transpose() * (a * a.transpose()).llt().solve(set.eq_rhs());
    if (a.rows() == n) basis.resize(n, 0);
    else basis = Eigen::FullPivLU<Eigen::MatrixXd>(a).kernel();
  }

  const Eigen::MatrixXd rv = sr.rows * basis;
  const Eigen::VectorXd m0 = sr.rows * xp - sr.rhs;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.cols());
  Eigen::VectorXd margins = m0;
  for (double beta : {1.0, 10.0, 100.0}) {
    if (basis.cols() == 0) break;
    for (int it = 0; it < 100; ++it) {
      margins = rv * v + m0;
      if (margins.maxCoeff() < -1e-6) return;
      double f = 0.0;
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(v.size());
      Eigen::MatrixXd hess =
          1e-9 * Eigen::MatrixXd::Identity(v.size(), v.size());
      for (Eigen::Index j = 0; j < margins.size(); ++j) {
        const double sig = logistic(beta * margins[j]);
        f += softplus(beta, margins[j]);
        grad += sig * rv.row(j).transpose();
        hess += beta * sig * (1.0 - sig) * rv.row(j).transpose() * rv.row(j);
      }
      if (grad.lpNorm<Eigen::Infinity>() < 1e-13) break;
      const Eigen::VectorXd dv = -hess.ldlt().solve(grad);
      const double slope = grad.dot(dv);
      double alpha = 1.0;
      bool accepted = false;
      while (alpha > 1e-14) {
        const Eigen::VectorXd mt = rv * (v + alpha * dv) + m0;
        double ft = 0.0;
        for (Eigen::Index j = 0; j < mt.size(); ++j) ft += softplus(beta, mt[j]);
        if (ft <= f + 1e-4 * alpha * slope) {
          v += alpha * dv;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
    }
  }
  margins = rv * v + m0;
  if (margins.maxCoeff() > -1e-9) {
    throw ValidationError(
        "constraint set has no strictly feasible point inside the potential "
        "domain");
  }
}

// ---------------------------------------------------------------------------
// Objective: the x-dependent part of the divergence being minimized.
//   left   f(x) = Φ(x) − ⟨x, ∇Φ(y)⟩         ∇f = ∇Φ(x) − ∇Φ(y)
//   right  f(x) = ⟨x−y, ∇Φ(x)⟩ − Φ(x)       ∇f = ∇²Φ(x)(x−y)
// The right Hessian adds the third-derivative term ∇³Φ(x)∘(x−y); the
// norm-integral family has no separable third derivative, so it falls back
// to differencing the gradient map.
// ---------------------------------------------------------------------------

struct Objective {
  const PotentialSpec& spec;
  Side side;
  Eigen::VectorXd y;
  Eigen::VectorXd grad_y;  // left side only

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    if (side == Side::Left) return grad_potential(spec, x) - grad_y;
    return hess_potential(spec, x) * (x - y);
  }

  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const {
    if (side == Side::Left) return hess_potential(spec, x);
    if (has_separable_third_derivative(spec)) {
      Eigen::MatrixXd h = hess_potential(spec, x);
      h.diagonal() += third_derivative_diag(spec, x).cwiseProduct(x - y);
      return h;
    }
    const Eigen::Index n = x.size();
    Eigen::MatrixXd h(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double step = 1e-6 * (1.0 + std::abs(x[j]));
      Eigen::VectorXd xp = x, xm = x;
      xp[j] += step;
      xm[j] -= step;
      h.col(j) = (gradient(xp) - gradient(xm)) / (2.0 * step);
    }
    return 0.5 * (h + h.transpose());
  }
};

// Cholesky of k + τI with τ escalated until the factorization succeeds; the
// right objective can be indefinite away from the solution.
Eigen::LLT<Eigen::MatrixXd> factor_regularized(const Eigen::MatrixXd& k) {
  const Eigen::Index n = k.rows();
  const double scale = std::max(1.0, k.diagonal().cwiseAbs().maxCoeff());
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  double tau = 1e-12 * scale;
  while (llt.info() != Eigen::Success && tau <= 1e3 * scale) {
    llt.compute(k + tau * Eigen::MatrixXd::Identity(n, n));
    tau *= 100.0;
  }
  if (llt.info() != Eigen::Success) {
    throw ValidationError("KKT system could not be regularized");
  }
  return llt;
}

// Largest step ≤ 1 keeping x strictly inside the potential's domain box,
// damped by the fraction-to-boundary rule.
double domain_step_limit(const DomainBox& box, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& dx, double frac) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (dx[i] < 0.0 && std::isfinite(box.lo[i])) {
      alpha = std::min(alpha, frac * (x[i] - box.lo[i]) / -dx[i]);
    }
    if (dx[i] > 0.0 && std::isfinite(box.hi[i])) {
      alpha = std::min(alpha, frac * (box.hi[i] - x[i]) / dx[i]);
    }
  }
  return alpha;
}

Eigen::VectorXd default_start(const PotentialSpec& spec, const ConstraintSet& set,
                              const Eigen::VectorXd& y) {
  const DomainBox box = domain_box(spec);
  Eigen::VectorXd x = y;
  auto clamp = [&](Eigen::VectorXd& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double width = box.hi[i] - box.lo[i];
      const double margin = std::isfinite(width) ? 0.05 * std::min(1.0, width) : 0.05;
      if (std::isfinite(box.lo[i])) t[i] = std::max(t[i], box.lo[i] + margin);
      if (std::isfinite(box.hi[i])) t[i] = std::min(t[i], box.hi[i] - margin);
    }
  };
  clamp(x);
  if (set.eq_matrix().rows() > 0) {
    const Eigen::MatrixXd& a = set.eq_matrix();
    x += a.transpose() *
         (a * a.transpose()).llt().solve(set.eq_rhs() - a * x);
    clamp(x);
  }
  // Fractional-power families have Hessian kinks at zero coordinates; nudge
  // off them so the first Newton system is well defined.
  if (spec.family == Family::GammaNorm ||
      (spec.family == Family::NormIntegral && spec.norm == NormKind::PNorm)) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (std::abs(x[i]) < 1e-8) x[i] = 1e-6;
    }
  }
  return x;
}

struct KktResiduals {
  Eigen::VectorXd dual, primal_eq, primal_ineq, comp;

  double max_norm() const {
    double r = dual.size() ? dual.lpNorm<Eigen::Infinity>() : 0.0;
    if (primal_eq.size()) r = std::max(r, primal_eq.lpNorm<Eigen::Infinity>());
    if (primal_ineq.size()) {
      r = std::max(r, primal_ineq.lpNorm<Eigen::Infinity>());
      r = std::max(r, comp.cwiseAbs().maxCoeff());
    }
    return r;
  }

  double merit(double mu) const {
    double q = dual.squaredNorm() + primal_eq.squaredNorm() +
               primal_ineq.squaredNorm();
    if (comp.size()) {
      q += (comp.array() - mu).matrix().squaredNorm();
    }
    return std::sqrt(q);
  }
};

struct SolverCore {
  const PotentialSpec& spec;
  const ConstraintSet& set;
  const Objective& obj;
  const SolveOptions& opts;
  DomainBox box;

  // full primal-dual state; s and z are empty when there are no inequalities
  struct State {
    Eigen::VectorXd x, lam, s, z;
  };

  bool residuals(const State& st, KktResiduals* out) const {
    if (!in_domain_interior(spec, st.x)) return false;
    Eigen::VectorXd g;
    try {
      g = obj.gradient(st.x);
    } catch (const DomainError&) {
      return false;
    }
    if (!g.allFinite()) return false;
    out->dual = g;
    if (set.eq_matrix().rows() > 0) {
      out->dual += set.eq_matrix().transpose() * st.lam;
      out->primal_eq = set.eq_matrix() * st.x - set.eq_rhs();
    } else {
      out->primal_eq.resize(0);
    }
    if (set.has_inequalities()) {
      out->dual += set.ineq_matrix().transpose() * st.z;
      out->primal_ineq = set.ineq_matrix() * st.x + st.s - set.ineq_rhs();
      out->comp = st.s.cwiseProduct(st.z);
    } else {
      out->primal_ineq.resize(0);
      out->comp.resize(0);
    }
    return true;
  }

  // One reduced KKT solve:  [K Aᵀ; A 0] (dx,dλ) = (rhs_x, −r_p)
  void solve_kkt(const Eigen::MatrixXd& k, const Eigen::VectorXd& rhs_x,
                 const Eigen::VectorXd& rp, Eigen::VectorXd* dx,
                 Eigen::VectorXd* dlam) const {
    const auto llt = factor_regularized(k);
    const Eigen::MatrixXd& a = set.eq_matrix();
    if (a.rows() == 0) {
      *dx = llt.solve(rhs_x);
      dlam->resize(0);
      return;
    }
    const Eigen::MatrixXd kinv_at = llt.solve(a.transpose());
    const Eigen::MatrixXd schur = a * kinv_at;
    *dlam = schur.ldlt().solve(a * llt.solve(rhs_x) + rp);
    *dx = llt.solve(rhs_x - a.transpose() * *dlam);
  }

  ProjectionResult run(Eigen::VectorXd x0) const {
    State st;
    st.x = std::move(x0);
    st.lam = Eigen::VectorXd::Zero(set.eq_matrix().rows());
    const Eigen::Index m = set.ineq_matrix().rows();
    if (m > 0) {
      st.s = (set.ineq_rhs() - set.ineq_matrix() * st.x).cwiseMax(0.1);
      st.z = Eigen::VectorXd::Ones(m);
    }

    ProjectionResult result;
    result.side = obj.side;
    KktResiduals res;
    if (!residuals(st, &res)) {
      throw ValidationError("projection start point is not usable");
    }
    double best = kInf;
    Eigen::VectorXd best_x = st.x;

    for (int it = 0; it <= opts.max_iterations; ++it) {
      const double kkt = res.max_norm();
      if (opts.keep_trace) result.trace.push_back(kkt);
      if (kkt < best) {
        best = kkt;
        best_x = st.x;
      }
      if (kkt <= opts.kkt_tol) {
        result.point = st.x;
        result.iterations = it;
        result.kkt_residual = kkt;
        return result;
      }
      if (it == opts.max_iterations) break;

      Eigen::MatrixXd h;
      try {
        h = obj.hessian(st.x);
      } catch (const DomainError&) {
        // iterate sits on a Hessian kink; shift it off and carry on
        st.x.array() += 1e-9;
        if (!residuals(st, &res)) break;
        h = obj.hessian(st.x);
      }

      const double mu =
          m > 0 ? 0.2 * st.s.dot(st.z) / static_cast<double>(m) : 0.0;
      Eigen::MatrixXd k = h;
      Eigen::VectorXd rhs_x = -res.dual;
      if (m > 0) {
        const Eigen::ArrayXd zs = st.z.array() / st.s.array();
        k += set.ineq_matrix().transpose() *
             zs.matrix().asDiagonal() * set.ineq_matrix();
        const Eigen::VectorXd rc = res.comp.array() - mu;
        rhs_x -= set.ineq_matrix().transpose() *
                 ((st.z.cwiseProduct(res.primal_ineq) - rc).cwiseQuotient(st.s));
      }
      Eigen::VectorXd dx, dlam;
      solve_kkt(k, rhs_x, res.primal_eq, &dx, &dlam);

      Eigen::VectorXd ds, dz;
      if (m > 0) {
        ds = -res.primal_ineq - set.ineq_matrix() * dx;
        const Eigen::VectorXd rc = res.comp.array() - mu;
        dz = -(rc + st.z.cwiseProduct(ds)).cwiseQuotient(st.s);
      }

      double alpha = domain_step_limit(box, st.x, dx, opts.boundary_fraction);
      for (Eigen::Index i = 0; i < m; ++i) {
        if (ds[i] < 0.0) {
          alpha = std::min(alpha, -opts.boundary_fraction * st.s[i] / ds[i]);
        }
        if (dz[i] < 0.0) {
          alpha = std::min(alpha, -opts.boundary_fraction * st.z[i] / dz[i]);
        }
      }

      const double theta0 = res.merit(mu);
      State trial;
      KktResiduals trial_res;
      bool accepted = false;
      for (int ls = 0; ls < 60 && !accepted; ++ls, alpha *= 0.5) {
        trial.x = st.x + alpha * dx;
        trial.lam = st.lam + alpha * dlam;
        if (m > 0) {
          trial.s = st.s + alpha * ds;
          trial.z = st.z + alpha * dz;
        }
        if (!residuals(trial, &trial_res)) continue;
        if (trial_res.merit(mu) <= (1.0 - 0.01 * alpha) * theta0) {
          st = trial;
          res = trial_res;
          accepted = true;
        }
      }
      if (!accepted) break;  // stalled; the cap error reports the best seen
    }
    throw ConvergenceError("projection did not reach the KKT tolerance",
                           best_x, best, opts.max_iterations);
  }
};

ProjectionResult project(const PotentialSpec& spec, const ConstraintSet& set,
                         const Eigen::VectorXd& y, Side side,
                         const SolveOptions& opts) {
  if (set.ambient_dim() != spec.dim || y.size() != spec.dim) {
    throw ValidationError("projection: dimension mismatch");
  }
  if (!in_domain_interior(spec, y)) {
    throw DomainError("projection base point outside the domain interior");
  }

  if (set.violation(y) <= 1e-12) {
    ProjectionResult r;
    r.point = y;
    r.value = 0.0;
    r.side = side;
    r.kkt_residual = set.violation(y);
    return r;  // already in the set: the divergence minimum is exactly zero
  }

  require_feasible(spec, set);

  Objective obj{spec, side, y, Eigen::VectorXd()};
  if (side == Side::Left) obj.grad_y = grad_potential(spec, y);

  Eigen::VectorXd x0;
  if (opts.start) {
    if (opts.start->size() != spec.dim) {
      throw ValidationError("start point has wrong dimension");
    }
    if (!in_domain_interior(spec, *opts.start)) {
      throw DomainError("start point outside the domain interior");
    }
    x0 = *opts.start;
  } else {
    x0 = default_start(spec, set, y);
  }

  SolverCore core{spec, set, obj, opts, domain_box(spec)};
  ProjectionResult result = core.run(std::move(x0));
  const ExtendedReal d = side == Side::Left ? bregman_div(spec, result.point, y)
                                            : bregman_div(spec, y, result.point);
  result.value = d.value();
  return result;
}

}  // namespace

ProjectionResult left_project(const PotentialSpec& spec, const ConstraintSet& set,
                              const Eigen::VectorXd& y,
                              const SolveOptions& options) {
  return project(spec, set, y, Side::Left, options);
}

ProjectionResult right_project(const PotentialSpec& spec, const ConstraintSet& set,
                               const Eigen::VectorXd& y,
                               const SolveOptions& options) {
  return project(spec, set, y, Side::Right, options);
}

PythagorasReport pythagoras_check(const PotentialSpec& spec,
                                  const ConstraintSet& set,
                                  const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& x, Side side,
                                  const SolveOptions& options) {
  if (x.size() != spec.dim) {
    throw ValidationError("pythagoras: comparison point has wrong dimension");
  }
  if (set.violation(x) > options.constraint_tol) {
    throw ValidationError("pythagoras: comparison point is not in the set");
  }
  if (side == Side::Left ? !in_domain(spec, x) : !in_domain_interior(spec, x)) {
    throw DomainError("pythagoras: comparison point outside the usable domain");
  }

  PythagorasReport report;
  report.projection = side == Side::Left ? left_project(spec, set, y, options)
                                         : right_project(spec, set, y, options);
  const Eigen::VectorXd& p = report.projection.point;
  if (side == Side::Left) {
    report.lhs =
        (bregman_div(spec, x, p) + bregman_div(spec, p, y)).value();
    report.rhs = bregman_div(spec, x, y).value();
  } else {
    report.lhs =
        (bregman_div(spec, y, p) + bregman_div(spec, p, x)).value();
    report.rhs = bregman_div(spec, y, x).value();
  }
  report.slack = report.rhs - report.lhs;
  return report;
}

}  // namespace bregman
