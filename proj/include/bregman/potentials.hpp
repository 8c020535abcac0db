#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bregman/extended_real.hpp"
#include "bregman/pchip.hpp"
#include "bregman/rng.hpp"

namespace bregman {

enum class Family { NegEntropy, Burg, FermiDirac, GammaNorm, AlphaPower, NormIntegral };

enum class NormKind { Euclidean, PNorm };

/// Kebab-case family name as used by the CLI and JSON schema.
std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// A parameterized convex potential Φ on ℝⁿ with closed-form calculus:
///   neg-entropy    Σ (xᵢ log xᵢ − xᵢ)                 on x ≥ 0
///   burg           −Σ log xᵢ                          on x > 0
///   fermi-dirac    Σ (xᵢ log xᵢ + (1−xᵢ) log(1−xᵢ))   on 0 ≤ x ≤ 1
///   gamma-norm     γ Σ |xᵢ|^{1/γ},      γ ∈ ]0,1[     on ℝⁿ
///   alpha-power    σ/(α−1) Σ (xᵢ^α − 1), σ = ±1       on x ≥ 0 (α ∈ ]0,1[)
///                                                     or x > 0 (α < 0, σ = −1)
///   norm-integral  ∫₀^{‖x‖} φ(t) dt, tabulated φ      on ℝⁿ
/// Immutable after construction; all free functions below are pure.
struct PotentialSpec {
  Family family = Family::NegEntropy;
  Eigen::Index dim = 1;
  double gamma = 0.5;        // gamma-norm
  double alpha = 0.5;        // alpha-power
  MonotoneCurve phi;         // norm-integral radial profile
  NormKind norm = NormKind::Euclidean;
  double p = 2.0;            // norm exponent when norm == PNorm

  static PotentialSpec neg_entropy(Eigen::Index n);
  static PotentialSpec burg(Eigen::Index n);
  static PotentialSpec fermi_dirac(Eigen::Index n);
  static PotentialSpec gamma_norm(Eigen::Index n, double gamma);
  static PotentialSpec alpha_power(Eigen::Index n, double alpha);
};

/// Builds the norm-integral potential Ψ(x) = ∫₀^{‖x‖} φ with φ given as a
/// strictly increasing sample table [[t, φ(t)], ...]; p is read only for
/// NormKind::PNorm and must lie in ]1,∞[.
PotentialSpec build_norm_integral_potential(
    const std::vector<std::array<double, 2>>& phi_samples, NormKind norm,
    Eigen::Index dim, double p = 2.0);

bool in_domain(const PotentialSpec& spec, const Eigen::VectorXd& x);
bool in_domain_interior(const PotentialSpec& spec, const Eigen::VectorXd& x);
bool in_conjugate_domain_interior(const PotentialSpec& spec,
                                  const Eigen::VectorXd& y);
bool has_boundary(const PotentialSpec& spec);

/// Open box hull of int efd(Φ); entries may be ±inf.  Every built-in family
/// has a box interior, which is what the projection line search relies on.
struct DomainBox {
  Eigen::VectorXd lo, hi;
};
DomainBox domain_box(const PotentialSpec& spec);

/// Φ(x) on efd, +inf elsewhere (0·log 0 := 0 on the entropy boundaries).
ExtendedReal eval_potential(const PotentialSpec& spec, const Eigen::VectorXd& x);

/// ∇Φ(x) for x ∈ int efd; DomainError otherwise.
Eigen::VectorXd grad_potential(const PotentialSpec& spec, const Eigen::VectorXd& x);

/// ∇²Φ(x), symmetric positive definite on int efd (diagonal for the
/// separable families); DomainError off the interior or at points where a
/// fractional power makes the Hessian blow up or degenerate.
Eigen::MatrixXd hess_potential(const PotentialSpec& spec, const Eigen::VectorXd& x);

/// Diagonal of the third derivative tensor for the separable families.
bool has_separable_third_derivative(const PotentialSpec& spec);
Eigen::VectorXd third_derivative_diag(const PotentialSpec& spec,
                                      const Eigen::VectorXd& x);

/// Φ*(y) = sup_x {⟨x,y⟩ − Φ(x)} in closed form; +inf on unbounded suprema.
ExtendedReal fenchel_conjugate(const PotentialSpec& spec, const Eigen::VectorXd& y);

/// (∇Φ)⁻¹(y) = ∇Φ*(y) for y ∈ int efd(Φ*); DomainError otherwise.
Eigen::VectorXd grad_conjugate(const PotentialSpec& spec, const Eigen::VectorXd& y);

/// Conjugate by per-coordinate Newton maximization (radial reduction for the
/// norm-integral family), independent of the closed forms; used to cross-check
/// them.  Tolerance is on the 1-D stationarity residual.
ExtendedReal fenchel_conjugate_numeric(const PotentialSpec& spec,
                                       const Eigen::VectorXd& y,
                                       double tol = 1e-10);

/// Numeric biconjugate Φ**(x) = sup_y {⟨x,y⟩ − Φ*(y)} through the same 1-D
/// machinery applied to the conjugate's coordinate functions.
ExtendedReal biconjugate_numeric(const PotentialSpec& spec,
                                 const Eigen::VectorXd& x, double tol = 1e-10);

/// Draws a well-conditioned point of int efd(Φ) (coordinates kept away from
/// kinks of the fractional-power families).
Eigen::VectorXd sample_interior(const PotentialSpec& spec, Rng& rng);

/// Draws a boundary point of cl(efd(Φ)); DomainError for full-domain families.
Eigen::VectorXd sample_boundary(const PotentialSpec& spec, Rng& rng);

/// Configuration of the Euler-Legendre verification.  The -1e6 slope
/// threshold is far below what the logarithmic families can reach on the
/// schedule (their slope grows like log t, bottoming out near -20), so a
/// probe also passes when the slope decreases monotonically along the
/// schedule and deepens by slope_growth relative to the first step --
/// numerical evidence of the boundary-slope divergence that defines
/// essential smoothness.  2.5 leaves margin under the log-family ratio
/// log(t_last)/log(t_first) ≈ 4 once coordinate magnitudes shift it.
struct LegendreOptions {
  double roundtrip_tol = 1e-8;
  double slope_threshold = -1e6;
  double slope_growth = 2.5;
  std::vector<double> schedule = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  int boundary_probes = 20;
};

struct BoundaryProbe {
  Eigen::VectorXd interior, boundary;
  std::vector<double> slopes;  // directional derivative toward the interior
  bool decreasing = false;
  bool deep = false;
};

struct LegendreReport {
  double roundtrip_residual = 0.0;
  bool roundtrip_pass = false;
  std::vector<BoundaryProbe> probes;
  bool boundary_pass = false;
  bool pass = false;
};

/// Numerical Euler-Legendre evidence: gradient bijection round trip on
/// sampled interiors plus boundary-slope probes along segments into the
/// interior.  Families without boundary pass the slope test vacuously.
LegendreReport check_euler_legendre(const PotentialSpec& spec, int n_samples,
                                    std::uint64_t seed,
                                    const LegendreOptions& options = {});

}  // namespace bregman
