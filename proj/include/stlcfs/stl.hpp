#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "stlcfs/constraint_block.hpp"
#include "stlcfs/dynamics.hpp"
#include "stlcfs/layout.hpp"
#include "stlcfs/scenario.hpp"

namespace stlcfs {

/// Goal-ball robustness: epsilon - ||x - center||.
double rho_exact(const Eigen::Vector3d& x, const Goal& goal);

/// Max of rho_exact over the goal window. No smoothing.
double window_robustness_exact(const Trajectory& traj, const Goal& goal);

/// rho_exact at every step of the goal window, in time order.
std::vector<double> rho_window(const Trajectory& traj, const Goal& goal);

/// Smooth over-approximation of max(mu_prev, rho):
/// 0.5 * (mu_prev + rho + sqrt((mu_prev - rho)^2 + alpha^2)).
double smooth_max(double mu_prev, double rho, double alpha);

/// First-order expansion of smooth_max around (mu_ref, rho_ref):
/// G(mu, rho) ~= c_mu * mu + c_rho * rho + c_0.
struct SmoothMaxCoeffs {
  double c_mu = 0.5;
  double c_rho = 0.5;
  double c_0 = 0.0;
};

SmoothMaxCoeffs smooth_max_coeffs(double mu_ref, double rho_ref, double alpha);

/// Constraint rows of the linearized running-max recursion for one goal.
struct MuChain {
  ConstraintBlock base{ConeKind::zero};        // mu(tau_start) = rho(tau_start)
  ConstraintBlock recursion{ConeKind::zero};   // one row per step tau_start+1..tau_end
  ConstraintBlock terminal{ConeKind::nonneg};  // mu(tau_end) >= 0
  std::vector<SmoothMaxCoeffs> coeffs;         // parallel to recursion rows
};

/// `rho_refs` and `mu_refs` hold reference values over the window of goal k
/// (index 0 is tau_start). Throws std::invalid_argument on length mismatch.
MuChain build_mu_chain(int k, const VariableLayout& layout, std::span<const double> rho_refs,
                       std::span<const double> mu_refs, double alpha);

/// Unrolls the linearized chain: mu(tau_end) = sum_t weight[t] * rho(t) + constant.
struct UnrolledChain {
  std::vector<double> rho_weights;  // over the window
  double constant = 0.0;
};

UnrolledChain unroll_chain(const std::vector<SmoothMaxCoeffs>& coeffs);

}  // namespace stlcfs
