#include "stlcfs/stl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stlcfs {

double rho_exact(const Eigen::Vector3d& x, const Goal& goal) { return goal.epsilon - (x - goal.center).norm(); }

double window_robustness_exact(const Trajectory& traj, const Goal& goal) {
  double best = -std::numeric_limits<double>::infinity();
  for (int t = goal.tau_start; t <= goal.tau_end; ++t) best = std::max(best, rho_exact(traj.x(t), goal));
  return best;
}

std::vector<double> rho_window(const Trajectory& traj, const Goal& goal) {
  std::vector<double> out;
  out.reserve(goal.window_length());
  for (int t = goal.tau_start; t <= goal.tau_end; ++t) out.push_back(rho_exact(traj.x(t), goal));
  return out;
}

double smooth_max(double mu_prev, double rho, double alpha) {
  // Same value as the closed form, written as max + excess so the excess
  // (in (0, alpha/2]) never cancels away.
  const double gap = std::abs(mu_prev - rho);
  const double excess = 0.5 * alpha * alpha / (std::hypot(gap, alpha) + gap);
  return std::max(mu_prev, rho) + excess;
}

SmoothMaxCoeffs smooth_max_coeffs(double mu_ref, double rho_ref, double alpha) {
  const double d = mu_ref - rho_ref;
  const double h = std::hypot(d, alpha);
  // The smaller coefficient is 0.5 * alpha^2 / (h * (h + |d|)), the larger its complement.
  const double small = 0.5 * alpha * alpha / (h * (h + std::abs(d)));
  SmoothMaxCoeffs c;
  if (d >= 0.0) {
    c.c_rho = small;
    c.c_mu = 1.0 - small;
  } else {
    c.c_mu = small;
    c.c_rho = 1.0 - small;
  }
  c.c_0 = smooth_max(mu_ref, rho_ref, alpha) - c.c_mu * mu_ref - c.c_rho * rho_ref;
  return c;
}

MuChain build_mu_chain(int k, const VariableLayout& layout, std::span<const double> rho_refs,
                       std::span<const double> mu_refs, double alpha) {
  const int t0 = layout.tau_start(k);
  const int t1 = layout.tau_end(k);
  const std::size_t len = static_cast<std::size_t>(t1 - t0 + 1);
  if (rho_refs.size() != len || mu_refs.size() != len) {
    throw std::invalid_argument("build_mu_chain: references do not cover the goal window");
  }
  MuChain chain;
  chain.base.add_row(0.0).coeffs = {{layout.mu(k, t0), 1.0}, {layout.rho(k, t0), -1.0}};
  for (int t = t0 + 1; t <= t1; ++t) {
    const std::size_t i = static_cast<std::size_t>(t - t0);
    const SmoothMaxCoeffs c = smooth_max_coeffs(mu_refs[i - 1], rho_refs[i], alpha);
    // mu(t) - c_mu mu(t-1) - c_rho rho(t) = c_0
    chain.recursion.add_row(c.c_0).coeffs = {
        {layout.mu(k, t), 1.0}, {layout.mu(k, t - 1), -c.c_mu}, {layout.rho(k, t), -c.c_rho}};
    chain.coeffs.push_back(c);
  }
  chain.terminal.add_row(0.0).coeffs = {{layout.mu(k, t1), -1.0}};
  return chain;
}

UnrolledChain unroll_chain(const std::vector<SmoothMaxCoeffs>& coeffs) {
  UnrolledChain out;
  out.rho_weights.assign(coeffs.size() + 1, 0.0);
  // Walk backwards from the terminal step carrying the product of c_mu.
  double carry = 1.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    out.rho_weights[i + 1] = carry * coeffs[i].c_rho;
    out.constant += carry * coeffs[i].c_0;
    carry *= coeffs[i].c_mu;
  }
  out.rho_weights[0] = carry;
  return out;
}

}  // namespace stlcfs
