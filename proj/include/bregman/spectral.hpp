#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>

#include "bregman/extended_real.hpp"
#include "bregman/hermitian.hpp"
#include "bregman/potentials.hpp"

namespace bregman {

/// Ψ(X) = Φ(λ(X)) — every built-in family is permutation symmetric, so the
/// value does not depend on the eigenvalue ordering.
template <typename Scalar>
ExtendedReal spectral_potential_eval(const PotentialSpec& spec,
                                     const Hermitian<Scalar>& x) {
  if (spec.dim != x.dim()) {
    throw ValidationError("spectral potential: dimension mismatch");
  }
  return eval_potential(spec, eigen_nonincreasing(x).eigenvalues);
}

/// ∇Ψ(X) = U diag(∇Φ(λ)) U*, the primary matrix function of Φ's derivative.
template <typename Scalar>
Hermitian<Scalar> spectral_grad(const PotentialSpec& spec,
                                const Hermitian<Scalar>& x) {
  if (spec.dim != x.dim()) {
    throw ValidationError("spectral gradient: dimension mismatch");
  }
  const auto ed = eigen_nonincreasing(x);
  if (!in_domain_interior(spec, ed.eigenvalues)) {
    throw DomainError("spectral gradient: spectrum outside the domain interior");
  }
  const Eigen::VectorXd g = grad_potential(spec, ed.eigenvalues);
  return Hermitian<Scalar>(ed.vectors * g.cast<Scalar>().asDiagonal() *
                           ed.vectors.adjoint());
}

enum class MatrixFamily { Umegaki, LogDet, Fermi, GammaNorm, Alpha };

inline std::string matrix_family_name(MatrixFamily f) {
  switch (f) {
    case MatrixFamily::Umegaki: return "umegaki";
    case MatrixFamily::LogDet: return "logdet";
    case MatrixFamily::Fermi: return "fermi";
    case MatrixFamily::GammaNorm: return "gamma-norm";
    case MatrixFamily::Alpha: return "alpha";
  }
  throw ValidationError("unknown matrix family");
}

inline MatrixFamily matrix_family_from_name(const std::string& name) {
  if (name == "umegaki") return MatrixFamily::Umegaki;
  if (name == "logdet") return MatrixFamily::LogDet;
  if (name == "fermi") return MatrixFamily::Fermi;
  if (name == "gamma-norm") return MatrixFamily::GammaNorm;
  if (name == "alpha") return MatrixFamily::Alpha;
  throw ValidationError("unknown matrix family: " + name);
}

struct MatrixDivSpec {
  MatrixFamily family = MatrixFamily::Umegaki;
  double gamma = 0.5;  // gamma-norm
  double alpha = 0.5;  // alpha

  static MatrixDivSpec umegaki() { return {MatrixFamily::Umegaki, 0.5, 0.5}; }
  static MatrixDivSpec logdet() { return {MatrixFamily::LogDet, 0.5, 0.5}; }
  static MatrixDivSpec fermi() { return {MatrixFamily::Fermi, 0.5, 0.5}; }
  static MatrixDivSpec gamma_norm(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
      throw ValidationError("gamma must lie in ]0,1[");
    }
    return {MatrixFamily::GammaNorm, gamma, 0.5};
  }
  static MatrixDivSpec alpha_power(double alpha) {
    if (!(alpha < 0.0 || (alpha > 0.0 && alpha < 1.0))) {
      throw ValidationError("alpha must lie in ]0,1[ or be negative");
    }
    return {MatrixFamily::Alpha, 0.5, alpha};
  }
};

namespace detail {

/// Σ λ log λ with the 0·log 0 := 0 convention; eigenvalues within the
/// spectral threshold of zero are treated as zero.
inline double entropy_sum(const Eigen::VectorXd& lam) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const double t = lam[i] <= kSpectralThreshold ? 0.0 : lam[i];
    if (t > 0.0) s += t * std::log(t);
  }
  return s;
}

template <typename Scalar, typename Fn>
typename Hermitian<Scalar>::Matrix apply_spectral(
    const EigenDecomposition<Scalar>& ed, Fn&& f) {
  Eigen::VectorXd fv(ed.eigenvalues.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv[i] = f(ed.eigenvalues[i]);
  return ed.vectors * fv.template cast<Scalar>().asDiagonal() *
         ed.vectors.adjoint();
}

template <typename Derived, typename Other>
double real_trace_product(const Eigen::MatrixBase<Derived>& a,
                          const Eigen::MatrixBase<Other>& b) {
  using std::real;
  return real((a * b).trace());
}

inline double clamp_tiny_negative(double d) {
  return d < 0.0 && d > -1e-13 ? 0.0 : d;
}

inline bool inside_unit_interval_strictly(const Eigen::VectorXd& lam) {
  return lam(lam.size() - 1) > kSpectralThreshold &&
         lam(0) < 1.0 - kSpectralThreshold;
}

inline bool inside_unit_interval(const Eigen::VectorXd& lam) {
  return lam(lam.size() - 1) >= -kSpectralThreshold &&
         lam(0) <= 1.0 + kSpectralThreshold;
}

}  // namespace detail

/// Closed-form matrix divergences, evaluated directly from the stated trace
/// formulas (not through the generic construction, which they cross-check):
///   umegaki     tr(ξ(log ξ − log ζ) − ξ + ζ)           ξ ≥ 0, ζ > 0
///   logdet      tr(ζ⁻¹ξ) − log det(ζ⁻¹ξ) − n           ξ, ζ > 0
///   fermi       tr(ξ(log ξ−log ζ) + (1−ξ)(log(1−ξ)−log(1−ζ)))
///                                                       0 ≤ ξ ≤ 1, 0 < ζ < 1
///   gamma-norm  tr(γ|ξ|^{1/γ} + (1−γ)ζ^{1/γ} − ξζ^{1/γ−1})   ξ hermitian, ζ > 0
///   alpha       σ/(α−1)·tr(ξ^α + (α−1)ζ^α − αξζ^{α−1})  σ = +1 on ]0,1[ (ξ ≥ 0,
///                                                       ζ > 0), −1 for α < 0
///                                                       (both > 0)
/// +infinity outside the stated positivity classes (spectral threshold 1e-12).
template <typename Scalar>
ExtendedReal matrix_div(const MatrixDivSpec& fam, const Hermitian<Scalar>& xi,
                        const Hermitian<Scalar>& zeta) {
  if (xi.dim() != zeta.dim()) {
    throw ValidationError("matrix divergence: dimension mismatch");
  }
  const double n = static_cast<double>(xi.dim());
  const auto exi = eigen_nonincreasing(xi);
  const auto eze = eigen_nonincreasing(zeta);
  const PositivityClass cxi = classify_spectrum(exi.eigenvalues);
  const PositivityClass cze = classify_spectrum(eze.eigenvalues);
  const bool xi_psd = cxi != PositivityClass::Indefinite;
  const bool ze_strict = cze == PositivityClass::StrictlyPositive;

  switch (fam.family) {
    case MatrixFamily::Umegaki: {
      if (!xi_psd || !ze_strict) return ExtendedReal::infinity();
      const auto log_ze = detail::apply_spectral(
          eze, [](double t) { return std::log(t); });
      const double d = detail::entropy_sum(exi.eigenvalues) -
                       detail::real_trace_product(xi.matrix(), log_ze) -
                       exi.eigenvalues.sum() + eze.eigenvalues.sum();
      return detail::clamp_tiny_negative(d);
    }
    case MatrixFamily::LogDet: {
      if (cxi != PositivityClass::StrictlyPositive || !ze_strict) {
        return ExtendedReal::infinity();
      }
      const auto ze_inv = detail::apply_spectral(
          eze, [](double t) { return 1.0 / t; });
      const double d =
          detail::real_trace_product(ze_inv, xi.matrix()) -
          exi.eigenvalues.array().log().sum() +
          eze.eigenvalues.array().log().sum() - n;
      return detail::clamp_tiny_negative(d);
    }
    case MatrixFamily::Fermi: {
      if (!detail::inside_unit_interval(exi.eigenvalues) ||
          !detail::inside_unit_interval_strictly(eze.eigenvalues)) {
        return ExtendedReal::infinity();
      }
      const auto log_ze = detail::apply_spectral(
          eze, [](double t) { return std::log(t); });
      const auto log_one_minus_ze = detail::apply_spectral(
          eze, [](double t) { return std::log(1.0 - t); });
      const double d =
          detail::entropy_sum(exi.eigenvalues) +
          detail::entropy_sum((1.0 - exi.eigenvalues.array()).matrix()) -
          detail::real_trace_product(xi.matrix(), log_ze) -
          log_one_minus_ze.real().trace() +
          detail::real_trace_product(xi.matrix(), log_one_minus_ze);
      return detail::clamp_tiny_negative(d);
    }
    case MatrixFamily::GammaNorm: {
      if (!ze_strict) return ExtendedReal::infinity();
      const double q = 1.0 / fam.gamma;
      const auto ze_pow = detail::apply_spectral(
          eze, [&](double t) { return std::pow(t, q - 1.0); });
      const double d =
          fam.gamma * exi.eigenvalues.array().abs().pow(q).sum() +
          (1.0 - fam.gamma) * eze.eigenvalues.array().pow(q).sum() -
          detail::real_trace_product(xi.matrix(), ze_pow);
      return detail::clamp_tiny_negative(d);
    }
    case MatrixFamily::Alpha: {
      const double a = fam.alpha;
      const bool positive_branch = a > 0.0;
      if (positive_branch ? (!xi_psd || !ze_strict)
                          : (cxi != PositivityClass::StrictlyPositive ||
                             !ze_strict)) {
        return ExtendedReal::infinity();
      }
      const double sigma = positive_branch ? 1.0 : -1.0;
      const auto ze_pow = detail::apply_spectral(
          eze, [&](double t) { return std::pow(t, a - 1.0); });
      const Eigen::ArrayXd xi_clamped =
          exi.eigenvalues.array().max(0.0);  // PSD band noise
      const double d =
          sigma / (a - 1.0) *
          (xi_clamped.pow(a).sum() +
           (a - 1.0) * eze.eigenvalues.array().pow(a).sum() -
           a * detail::real_trace_product(xi.matrix(), ze_pow));
      return detail::clamp_tiny_negative(d);
    }
  }
  throw ValidationError("unknown matrix family");
}

/// The generic construction D(ξ,ζ) = Ψ(ξ) − Ψ(ζ) − ⟨ξ−ζ, ∇Ψ(ζ)⟩ with
/// Ψ = Φ∘λ and ⟨A,B⟩ = Re tr(AB); the closed forms above must agree with it.
template <typename Scalar>
ExtendedReal matrix_div_generic(const PotentialSpec& spec,
                                const Hermitian<Scalar>& xi,
                                const Hermitian<Scalar>& zeta) {
  if (xi.dim() != zeta.dim() || spec.dim != xi.dim()) {
    throw ValidationError("matrix divergence: dimension mismatch");
  }
  const auto eze = eigen_nonincreasing(zeta);
  if (!in_domain_interior(spec, eze.eigenvalues)) {
    throw DomainError(
        "generic matrix divergence: second argument outside the domain "
        "interior");
  }
  const auto exi = eigen_nonincreasing(xi);
  const ExtendedReal fx = eval_potential(spec, exi.eigenvalues);
  if (!fx.is_finite()) return ExtendedReal::infinity();
  const double fz = eval_potential(spec, eze.eigenvalues).value();
  const Eigen::VectorXd g = grad_potential(spec, eze.eigenvalues);
  const auto grad_ze = eze.vectors * g.cast<Scalar>().asDiagonal() *
                       eze.vectors.adjoint();
  const double cross = detail::real_trace_product(
      (xi.matrix() - zeta.matrix()).eval(), grad_ze);
  return detail::clamp_tiny_negative(fx.value() - fz - cross);
}

}  // namespace bregman
