#pragma once

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <string>

#include "bregman/constraints.hpp"
#include "bregman/extended_real.hpp"
#include "bregman/hermitian.hpp"
#include "bregman/norms.hpp"
#include "bregman/orlicz.hpp"
#include "bregman/potentials.hpp"
#include "bregman/projection.hpp"
#include "bregman/spectral.hpp"

namespace bregman {

enum class EmbeddingKind { MazurPower, SpinFactorSlice, OrliczInverse };
enum class CarrierKind { Vector, Matrix };

std::string embedding_kind_name(EmbeddingKind k);
EmbeddingKind embedding_kind_from_name(const std::string& name);
std::string carrier_kind_name(CarrierKind c);
CarrierKind carrier_kind_from_name(const std::string& name);

/// Element (λ, x) of the spin factor ℝ ⊕ X.  Nonnegative iff λ ≥ ‖x‖_X; the
/// normalized state slice fixes λ = 1 with x in the closed unit ball.
struct SpinFactorElement {
  double lambda = 1.0;
  Eigen::VectorXd x;
};

namespace detail {

inline void require_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ValidationError("power map needs gamma in ]0,1[");
  }
}

inline void require_power_params(double alpha, double beta, double gamma) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ValidationError("power pairing needs alpha > 0");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ValidationError("power pairing needs beta in ]0,1[");
  }
  require_gamma(gamma);
}

// Ψ_{α,β}(x) = (β/α) ‖x‖_p^{1/β} and its gradient; the gradient extends
// continuously by 0 at the origin because 1/β > 1.
inline double power_norm_value(double alpha, double beta, double p,
                               const Eigen::VectorXd& x) {
  return beta / alpha * std::pow(lp_norm(x, p), 1.0 / beta);
}

inline Eigen::VectorXd power_norm_gradient(double alpha, double beta, double p,
                                           const Eigen::VectorXd& x) {
  const double r = lp_norm(x, p);
  if (r == 0.0) return Eigen::VectorXd::Zero(x.size());
  return std::pow(r, 1.0 / beta - 1.0) / alpha * lp_norm_gradient(x, p);
}

template <typename Scalar>
Eigen::VectorXd nonneg_spectrum(const EigenDecomposition<Scalar>& ed,
                                const char* who) {
  if (ed.eigenvalues.minCoeff() < -kSpectralThreshold) {
    throw DomainError(std::string(who) +
                      " needs a positive semidefinite argument");
  }
  return ed.eigenvalues.cwiseMax(0.0);
}

}  // namespace detail

/// Power map φ ↦ φ^γ on the nonnegative cone, entrywise.  Entries inside the
/// spectral threshold band are clamped to 0; negativity beyond it is a
/// domain error.
Eigen::VectorXd mazur_forward(double gamma, const Eigen::VectorXd& x);

/// Spectral power map on the positive semidefinite cone.
template <typename Scalar>
Hermitian<Scalar> mazur_forward(double gamma, const Hermitian<Scalar>& x) {
  detail::require_gamma(gamma);
  const auto ed = eigen_nonincreasing(x);
  detail::nonneg_spectrum(ed, "mazur map");
  return Hermitian<Scalar>(detail::apply_spectral(
      ed, [&](double t) { return std::pow(std::max(t, 0.0), gamma); }));
}

/// Bijection ℓ: Z → ℓ(Z) pairing a state space with a potential carrier:
///   mazur-power        φ ↦ φ^γ on the nonnegative (vector) or positive
///                      semidefinite (matrix) cone,
///   spin-factor-slice  (1, x) ↦ x on the unit ball of (X, ‖·‖),
///   orlicz-inverse     ω ↦ φ⁻¹∘ω on weighted normalized densities; the
///                      inverse map is φ applied entrywise.
/// Every factory round-trips sampled state points through forward/inverse
/// and rejects representations that fail to invert within 1e-10.
class EmbeddingSpec {
 public:
  static EmbeddingSpec mazur_power(double gamma, CarrierKind carrier);
  static EmbeddingSpec spin_factor_slice(NormKind norm, double p = 2.0);
  static EmbeddingSpec orlicz_inverse(const OrliczFunction& phi,
                                      const Eigen::VectorXd& weights);

  EmbeddingKind kind() const { return kind_; }
  CarrierKind carrier() const { return carrier_; }
  double gamma() const { return gamma_; }
  NormKind norm() const { return norm_; }
  double norm_p() const { return p_; }
  const OrliczFunction& phi() const { return *phi_; }
  const Eigen::VectorXd& weights() const { return mu_; }

  std::string domain_description() const;
  std::string codomain_description() const;

  Eigen::VectorXd forward(const Eigen::VectorXd& z) const;
  Eigen::VectorXd inverse(const Eigen::VectorXd& u) const;

  /// Slice embedding (1, x) ↦ x; off-slice elements are domain errors.
  Eigen::VectorXd forward(const SpinFactorElement& v) const;
  SpinFactorElement inverse_spin(const Eigen::VectorXd& u) const;

  /// Norm of the spin-factor part space X.
  double part_norm(const Eigen::VectorXd& x) const;

  template <typename Scalar>
  Hermitian<Scalar> forward(const Hermitian<Scalar>& z) const {
    require_matrix_power("matrix forward");
    return mazur_forward(gamma_, z);
  }

  template <typename Scalar>
  Hermitian<Scalar> inverse(const Hermitian<Scalar>& u) const {
    require_matrix_power("matrix inverse");
    const auto ed = eigen_nonincreasing(u);
    detail::nonneg_spectrum(ed, "mazur inverse");
    const double e = 1.0 / gamma_;
    return Hermitian<Scalar>(detail::apply_spectral(
        ed, [&](double t) { return std::pow(std::max(t, 0.0), e); }));
  }

 private:
  EmbeddingSpec() = default;
  void require_matrix_power(const char* who) const;

  EmbeddingKind kind_ = EmbeddingKind::MazurPower;
  CarrierKind carrier_ = CarrierKind::Vector;
  double gamma_ = 0.5;
  NormKind norm_ = NormKind::Euclidean;
  double p_ = 2.0;
  std::optional<OrliczFunction> phi_;
  Eigen::VectorXd mu_;
};

/// Nonnegativity of a spin-factor element under the embedding's part norm.
bool spin_factor_nonneg(const EmbeddingSpec& e, const SpinFactorElement& v);
/// Membership in the normalized state slice {λ = 1, ‖x‖ ≤ 1}.
bool on_state_slice(const EmbeddingSpec& e, const SpinFactorElement& v);

/// The triple (Z, ℓ, Ψ): an embedding together with the Euler-Legendre
/// potential on the embedded carrier.  Construction verifies the pairing —
/// the potential passes its Euler-Legendre check and a canonical embedded
/// state lands in the interior of its gradient domain.
///
/// The power pairings keep exact closed-form carrier calculus (psi_value /
/// psi_gradient); potential() additionally exposes a library potential spec
/// for the solver — exact for the spin pairing, a dense power-profile sample
/// for the mazur pairing, and absent for the orlicz pairing whose Luxemburg
/// norm has no library-family representation.
class GeneralizedGeometry {
 public:
  /// ℓ_γ with Ψ_{α,β} = (β/α)‖·‖^{1/β} on the ℓ_{1/γ} (vector) or
  /// Schatten-1/γ (matrix) carrier.
  static GeneralizedGeometry mazur(double alpha, double beta, double gamma,
                                   CarrierKind carrier, Eigen::Index dim);
  /// The α = γ(1−γ), β = γ parameter choice; exposed by name as a preset,
  /// not claimed as a default.
  static GeneralizedGeometry mazur_gamma_preset(double gamma,
                                                CarrierKind carrier,
                                                Eigen::Index dim);
  /// Slice embedding paired with a norm-integral Ψ_φ over the same norm.
  static GeneralizedGeometry spin_factor(const PotentialSpec& psi);
  /// Inverse-function embedding paired with Ψ_{β,β} = ‖·‖^{1/β} over the
  /// weighted Luxemburg norm of the same Orlicz function.
  static GeneralizedGeometry orlicz(const OrliczFunction& phi,
                                    const Eigen::VectorXd& weights,
                                    double beta);

  const EmbeddingSpec& embedding() const { return *embedding_; }
  Eigen::Index dim() const { return dim_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  bool has_potential_spec() const { return potential_.has_value(); }
  const PotentialSpec& potential() const;

  /// Exact carrier potential Ψ and gradient on the embedded vector space.
  double psi_value(const Eigen::VectorXd& u) const;
  Eigen::VectorXd psi_gradient(const Eigen::VectorXd& u) const;

 private:
  GeneralizedGeometry() = default;

  std::optional<EmbeddingSpec> embedding_;
  std::optional<PotentialSpec> potential_;
  std::optional<LuxemburgNorm> lux_;
  Eigen::Index dim_ = 0;
  double alpha_ = 1.0;
  double beta_ = 0.5;
};

/// D_{ℓ_γ,Ψ_{α,β}}(φ,ψ) in closed form:
///   α⁻¹( β‖φ‖₁^{γ/β} + (1−β)‖ψ‖₁^{γ/β} − ‖ψ‖₁^{γ/β−1}·tr(φ^γ ψ^{1−γ}) )
/// with ‖·‖₁ the mass (sum / trace) on the nonnegative carrier and the
/// trace term Σᵢ φᵢ^γ ψᵢ^{1−γ} in the vector case.  ψ must be nonzero.
ExtendedReal d_mazur(double alpha, double beta, double gamma,
                     const Eigen::VectorXd& phi, const Eigen::VectorXd& psi);

template <typename Scalar>
ExtendedReal d_mazur(double alpha, double beta, double gamma,
                     const Hermitian<Scalar>& phi,
                     const Hermitian<Scalar>& psi) {
  detail::require_power_params(alpha, beta, gamma);
  if (phi.dim() != psi.dim()) {
    throw ValidationError("d_mazur arguments have different dimensions");
  }
  const auto edf = eigen_nonincreasing(phi);
  const auto edg = eigen_nonincreasing(psi);
  const Eigen::VectorXd lf = detail::nonneg_spectrum(edf, "d_mazur");
  const Eigen::VectorXd lg = detail::nonneg_spectrum(edg, "d_mazur");
  const double s2 = lg.sum();
  if (s2 <= kSpectralThreshold) {
    throw DomainError("d_mazur second argument must be nonzero");
  }
  if (phi.matrix() == psi.matrix()) return 0.0;
  const auto fg = detail::apply_spectral(
      edf, [&](double t) { return std::pow(std::max(t, 0.0), gamma); });
  const auto gg = detail::apply_spectral(
      edg, [&](double t) { return std::pow(std::max(t, 0.0), 1.0 - gamma); });
  const double cross = detail::real_trace_product(fg, gg);
  const double e = gamma / beta;
  return detail::clamp_tiny_negative(
      (beta * std::pow(lf.sum(), e) + (1.0 - beta) * std::pow(s2, e) -
       std::pow(s2, e - 1.0) * cross) /
      alpha);
}

/// The same divergence written through the Jordan product
/// a • b = (ab + ba)/2 and the trace functional:
///   α⁻¹( β τ(ω)^{γ/β} + (1−β) τ(φ)^{γ/β} − τ(φ)^{γ/β−1}·τ(ω^γ • φ^{1−γ}) )
/// on real symmetric carriers; coincides with d_mazur because the trace
/// kills the commutator half.
ExtendedReal d_jordan(double alpha, double beta, double gamma,
                      const Hermitian<double>& omega,
                      const Hermitian<double>& phi);

/// Discrete Orlicz divergence on weighted normalized densities:
///   β⁻¹(1 − φ̄(ω,ρ)/φ̄(ρ,ρ)),   φ̄(ω,ρ) = Σᵢ μᵢ φ⁻¹(ωᵢ) φ'(φ⁻¹(ρᵢ)).
/// Inputs must satisfy Σ μᵢωᵢ = 1 = Σ μᵢρᵢ within 1e-10.
ExtendedReal d_orlicz_discrete(const OrliczFunction& phi_fn, double beta,
                               const Eigen::VectorXd& mu,
                               const Eigen::VectorXd& omega,
                               const Eigen::VectorXd& rho);

/// D_Ψ(ℓφ, ℓψ) through the generic Brègman formula on the embedded carrier.
/// Arguments must be state-space elements; the second argument must embed
/// into the gradient domain of Ψ (for the orlicz pairing both arguments
/// must be normalized densities).
ExtendedReal pullback_div(const GeneralizedGeometry& g,
                          const Eigen::VectorXd& a, const Eigen::VectorXd& b);
ExtendedReal pullback_div(const GeneralizedGeometry& g,
                          const SpinFactorElement& v,
                          const SpinFactorElement& w);

template <typename Scalar>
ExtendedReal pullback_div(const GeneralizedGeometry& g,
                          const Hermitian<Scalar>& a,
                          const Hermitian<Scalar>& b) {
  const EmbeddingSpec& e = g.embedding();
  if (e.kind() != EmbeddingKind::MazurPower ||
      e.carrier() != CarrierKind::Matrix) {
    throw ValidationError("hermitian pullback needs a matrix mazur geometry");
  }
  if (a.dim() != g.dim() || b.dim() != g.dim()) {
    throw ValidationError("pullback arguments have the wrong dimension");
  }
  const Hermitian<Scalar> ea = e.forward(a);
  const Hermitian<Scalar> eb = e.forward(b);
  if (a.matrix() == b.matrix()) return 0.0;
  const auto eda = eigen_nonincreasing(ea);
  const auto edb = eigen_nonincreasing(eb);
  const double p = 1.0 / e.gamma();
  const Eigen::VectorXd gv =
      detail::power_norm_gradient(g.alpha(), g.beta(), p, edb.eigenvalues);
  const auto grad = edb.vectors * gv.template cast<Scalar>().asDiagonal() *
                    edb.vectors.adjoint();
  const double cross =
      detail::real_trace_product(ea.matrix() - eb.matrix(), grad);
  return detail::clamp_tiny_negative(
      detail::power_norm_value(g.alpha(), g.beta(), p, eda.eigenvalues) -
      detail::power_norm_value(g.alpha(), g.beta(), p, edb.eigenvalues) -
      cross);
}

/// Divergence between normalized spin-factor states through the slice
/// embedding; identical to pullback_div on the same elements.
ExtendedReal spin_factor_div(const GeneralizedGeometry& g,
                             const SpinFactorElement& v,
                             const SpinFactorElement& w);

struct GeneralizedProjectionResult {
  Eigen::VectorXd embedded_point;  // minimizer in embedded coordinates
  Eigen::VectorXd state_point;     // its preimage in Z (spin: the x part)
  double value = 0.0;              // pullback divergence at the projection
  int iterations = 0;
  double kkt_residual = 0.0;
  Side side = Side::Left;
  // Equality defect |D(φ,P) + D(P,ψ) − D(φ,ψ)| at a feasible probe φ,
  // measured for left projections onto affine sets away from the cone/ball
  // boundary, where the generalized Pythagorean identity must hold.
  std::optional<double> pythagoras_gap;
  bool pythagoras_ok = true;  // gap ≤ 1e-6 whenever measured
};

/// Generalized projection of the state ψ onto a constraint set specified in
/// embedded coordinates: ℓ⁻¹ of the Brègman projection of ℓψ under the
/// carrier potential.  The mazur-vector feasible region is intersected with
/// the nonnegative orthant (the embedding's range); spin-factor results are
/// rejected if the optimizer leaves the unit ball, since such a set was not
/// ℓ-convex to begin with.  Orlicz geometries admit no nontrivial ℓ-convex
/// sets (their embedded state space is a strictly convex sphere) and are
/// rejected.  options.start, when given, is an embedded-space point.
GeneralizedProjectionResult generalized_project(
    const GeneralizedGeometry& g, const ConstraintSet& set,
    const Eigen::VectorXd& psi, Side side, const SolveOptions& options = {});
GeneralizedProjectionResult generalized_project(
    const GeneralizedGeometry& g, const ConstraintSet& set,
    const SpinFactorElement& psi, Side side, const SolveOptions& options = {});

}  // namespace bregman
