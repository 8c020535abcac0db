#pragma once

// Shared helpers for the test suites: the roster of exercised potential
// specs, hand-rolled finite-difference oracles (kept independent of any
// library differentiation code), and φ sample tables.

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bregman/potentials.hpp"

namespace testsupport {

inline std::vector<std::array<double, 2>> phi_table(
    const std::function<double(double)>& phi, double t_max, int knots) {
  std::vector<std::array<double, 2>> rows;
  rows.reserve(static_cast<std::size_t>(knots) + 1);
  for (int k = 0; k <= knots; ++k) {
    const double t = t_max * k / knots;
    rows.push_back({t, phi(t)});
  }
  return rows;
}

inline std::vector<std::array<double, 2>> linear_phi_table(double t_max = 8.0) {
  return phi_table([](double t) { return t; }, t_max, 64);
}

inline std::vector<std::array<double, 2>> cubic_phi_table(double t_max = 6.0) {
  return phi_table([](double t) { return t * t * t; }, t_max, 1536);
}

/// Every family/parameter combination the property suites run over.
inline std::vector<std::pair<std::string, bregman::PotentialSpec>>
all_test_specs(Eigen::Index n) {
  using bregman::NormKind;
  using bregman::PotentialSpec;
  std::vector<std::pair<std::string, PotentialSpec>> specs;
  specs.emplace_back("neg-entropy", PotentialSpec::neg_entropy(n));
  specs.emplace_back("burg", PotentialSpec::burg(n));
  specs.emplace_back("fermi-dirac", PotentialSpec::fermi_dirac(n));
  specs.emplace_back("gamma-norm(0.5)", PotentialSpec::gamma_norm(n, 0.5));
  specs.emplace_back("gamma-norm(0.4)", PotentialSpec::gamma_norm(n, 0.4));
  specs.emplace_back("alpha-power(0.5)", PotentialSpec::alpha_power(n, 0.5));
  specs.emplace_back("alpha-power(-1)", PotentialSpec::alpha_power(n, -1.0));
  specs.emplace_back("norm-integral(t,euclid)",
                     bregman::build_norm_integral_potential(
                         linear_phi_table(), NormKind::Euclidean, n));
  specs.emplace_back("norm-integral(t^3,euclid)",
                     bregman::build_norm_integral_potential(
                         cubic_phi_table(), NormKind::Euclidean, n));
  specs.emplace_back("norm-integral(t,p=3)",
                     bregman::build_norm_integral_potential(
                         linear_phi_table(), NormKind::PNorm, n, 3.0));
  return specs;
}

/// One representative spec per family (the six-family roster the acceptance
/// criteria quantify over).
inline std::vector<std::pair<std::string, bregman::PotentialSpec>>
family_specs(Eigen::Index n) {
  using bregman::NormKind;
  using bregman::PotentialSpec;
  std::vector<std::pair<std::string, PotentialSpec>> specs;
  specs.emplace_back("neg-entropy", PotentialSpec::neg_entropy(n));
  specs.emplace_back("burg", PotentialSpec::burg(n));
  specs.emplace_back("fermi-dirac", PotentialSpec::fermi_dirac(n));
  specs.emplace_back("gamma-norm", PotentialSpec::gamma_norm(n, 0.5));
  specs.emplace_back("alpha-power", PotentialSpec::alpha_power(n, 0.5));
  specs.emplace_back("norm-integral",
                     bregman::build_norm_integral_potential(
                         linear_phi_table(), NormKind::Euclidean, n));
  return specs;
}

/// Central-difference gradient of the potential value (test-side oracle).
inline Eigen::VectorXd fd_gradient(const bregman::PotentialSpec& spec,
                                   const Eigen::VectorXd& x) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x[i]));
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (bregman::eval_potential(spec, xp).value() -
            bregman::eval_potential(spec, xm).value()) /
           (2.0 * h);
  }
  return g;
}

/// Central-difference Jacobian of the closed-form gradient (Hessian oracle).
inline Eigen::MatrixXd fd_hessian(const bregman::PotentialSpec& spec,
                                  const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd h_mat(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = 1e-6 * (1.0 + std::abs(x[j]));
    Eigen::VectorXd xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    h_mat.col(j) = (bregman::grad_potential(spec, xp) -
                    bregman::grad_potential(spec, xm)) /
                   (2.0 * h);
  }
  return 0.5 * (h_mat + h_mat.transpose());
}

/// Two distinct interior points at least `sep` apart in max norm.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> distinct_interior_pair(
    const bregman::PotentialSpec& spec, bregman::Rng& rng, double sep = 1e-3) {
  for (;;) {
    Eigen::VectorXd a = bregman::sample_interior(spec, rng);
    Eigen::VectorXd b = bregman::sample_interior(spec, rng);
    if ((a - b).lpNorm<Eigen::Infinity>() >= sep) return {a, b};
  }
}

}  // namespace testsupport
