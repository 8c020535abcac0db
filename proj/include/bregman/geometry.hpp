#pragma once

#include <Eigen/Core>

#include <functional>
#include <utility>
#include <vector>

#include "bregman/constraints.hpp"
#include "bregman/potentials.hpp"
#include "bregman/projection.hpp"

namespace bregman {

/// Scale of the finite-difference steps used by the geometry calculus:
/// h = kGeometryFdScale · (1 + |coordinate|).
inline constexpr double kGeometryFdScale = 1e-4;

/// Smallest metric eigenvalue still treated as nondegenerate.
inline constexpr double kDegenerateMetricFloor = 1e-10;

/// Black-box divergence D(u, v) on an open coordinate patch of ℝⁿ, assumed
/// smooth to the stated order (at least 3, enough for metric + connections).
/// All downstream geometry is extracted by central finite differences with
/// one Richardson step, step kGeometryFdScale · (1 + |coordinate|); nothing
/// here ever asks the callable for derivatives.
class DivergenceField {
 public:
  using Fn = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

  DivergenceField(Fn d, Eigen::Index dim, int smoothness_order = 3);

  double operator()(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

  Eigen::Index dim() const { return dim_; }
  int smoothness_order() const { return order_; }

  /// max(|D(p,p)|, ‖∂_u D(u,p)|_{u=p}‖_∞): a genuine divergence keeps this
  /// at the finite-difference floor (≤ 1e-6) everywhere on its patch.
  double diagonal_residual(const Eigen::VectorXd& p) const;

  /// The same field with its arguments exchanged: D~(u, v) = D(v, u).
  DivergenceField swapped() const;

 private:
  Fn d_;
  Eigen::Index dim_;
  int order_;
};

/// Chart-level view of a Legendre potential: just enough calculus to build
/// its Brègman field and to move between the primal chart θ and the dual
/// chart η = ∇Ψ(θ). `interior` guards the θ-patch only.
struct PotentialChart {
  Eigen::Index dim = 0;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> dual_gradient;
  std::function<bool(const Eigen::VectorXd&)> interior;
};

PotentialChart chart_of(const PotentialSpec& spec);

/// Auxiliary exponential-family potential Ψ(θ) = Σ exp(θᵢ) on all of ℝⁿ,
/// the standard witness for a nonzero dual connection in the primal chart.
PotentialChart sum_exp_chart(Eigen::Index n);

/// Brègman field D_Ψ(u, v) = Ψ(u) − Ψ(v) − ⟨u − v, ∇Ψ(v)⟩ of a potential;
/// probing it outside the patch throws DomainError.
DivergenceField bregman_field(const PotentialSpec& spec);
DivergenceField bregman_field(const PotentialChart& chart);

/// Dense n×n×n coefficient array, stored row-major as [i][j][k].
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(Eigen::Index n)
      : n_(n), data_(static_cast<std::size_t>(n * n * n), 0.0) {}

  double& operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) {
    return data_[index(i, j, k)];
  }
  double operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
    return data_[index(i, j, k)];
  }

  Eigen::Index dim() const { return n_; }
  const std::vector<double>& data() const { return data_; }
  double max_abs() const;

 private:
  std::size_t index(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
    return static_cast<std::size_t>((i * n_ + j) * n_ + k);
  }

  Eigen::Index n_ = 0;
  std::vector<double> data_;
};

/// g_ij(p) = ∂²/∂uᵢ∂uⱼ D(u, p)|_{u=p}, symmetrized. Throws DomainError when
/// the smallest eigenvalue is ≤ 1e-10: a degenerate metric means the field
/// is not a divergence at p, and regularizing would only hide that.
Eigen::MatrixXd metric_from_divergence(const DivergenceField& d,
                                       const Eigen::VectorXd& p);

/// Eguchi connection pair at p:
///   Γ_ijk  = −∂ᵢ∂ⱼ|_{u=p} ∂ₖ|_{v=p} D(u, v)
///   Γ~_ijk = −∂ₖ|_{u=p} ∂ᵢ∂ⱼ|_{v=p} D(u, v)
/// Both symmetric in (i, j) by construction (computed once per unordered
/// pair), and the dual is evaluated as the primal rule on the swapped field,
/// so the pair of a swapped field is exactly the exchanged pair.
std::pair<Tensor3, Tensor3> connections_from_divergence(
    const DivergenceField& d, const Eigen::VectorXd& p);

/// Norden–Sen compatibility residual at p:
///   max over sampled triples (i,j,k) of |∂ᵢ g_jk − Γ_ijk − Γ~_ikj|.
double norden_sen_check(const DivergenceField& d, const Eigen::VectorXd& p,
                        int trials);

/// η = ∇Ψ(θ), checked to invert through the conjugate gradient back to θ
/// within 1e-8; a failed round trip throws ConvergenceError.
Eigen::VectorXd dual_coordinates(const PotentialSpec& spec,
                                 const Eigen::VectorXd& theta);
Eigen::VectorXd dual_coordinates(const PotentialChart& chart,
                                 const Eigen::VectorXd& theta);

/// Largest connection coefficients of the Brègman field over the sampled
/// patch points: Γ in the primal chart, Γ~ in the dual chart (the field
/// rewritten through ∇Ψ* and probed at η = ∇Ψ(θ)). Dual flatness of the
/// pair is precisely both maxima sitting at the finite-difference floor.
struct FlatnessReport {
  double theta_residual = 0.0;
  double eta_residual = 0.0;
};

FlatnessReport flatness_check(const PotentialSpec& spec,
                              const std::vector<Eigen::VectorXd>& points);
FlatnessReport flatness_check(const PotentialChart& chart,
                              const std::vector<Eigen::VectorXd>& points);

/// Generalized Pythagoras, differential form: the dual-geodesic chord from y
/// to its left projection P onto an affine set meets every tangent of the
/// set g-orthogonally at P. Returns the worst metric cosine
///   max_t |⟨Δη, t⟩| / (‖Δη‖_{H⁻¹} ‖t‖_H),  Δη = ∇Ψ(P) − ∇Ψ(y),
/// over a tangent basis t of the set; 0 when y already lies in the set.
double orthogonality_check(const PotentialSpec& spec, const ConstraintSet& set,
                           const Eigen::VectorXd& y,
                           const SolveOptions& options = {});

/// Point diagnostics of the dually flat structure induced by a potential.
struct GeometryReport {
  Eigen::VectorXd point;
  Eigen::MatrixXd metric;
  Tensor3 gamma;
  Tensor3 gamma_dual;
  double norden_sen_residual = 0.0;
  double flatness_residual = 0.0;
};

GeometryReport geometry_report(const PotentialSpec& spec,
                               const Eigen::VectorXd& p, int trials = 16);

}  // namespace bregman
