#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "stlcfs/constraint_block.hpp"
#include "stlcfs/dynamics.hpp"
#include "stlcfs/geometry.hpp"
#include "stlcfs/layout.hpp"
#include "stlcfs/scenario.hpp"
#include "stlcfs/solver.hpp"
#include "stlcfs/stl.hpp"

namespace stlcfs {

/// Per-goal window series; entry k covers [tau_start(k), tau_end(k)].
using WindowSeries = std::vector<std::vector<double>>;

/// Row span of one named constraint group inside the assembled A.
struct RowGroup {
  std::string name;
  ConeKind kind = ConeKind::zero;
  int offset = 0;
  int size = 0;
};

/// The convex subproblem around one reference, with the pieces needed to
/// interpret its solution.
struct Subproblem {
  ConicProgram program;
  VariableLayout layout;
  std::vector<MuChain> chains;                        // per goal
  std::vector<LinearizedObstacleConstraint> cfs;      // obstacle-major
  std::vector<RowGroup> groups;                       // in row order
  std::vector<int> rho_cone_rows;                     // first row of each (k, t) cone, goal-major

  const RowGroup* group(const std::string& name) const;
};

struct AssemblyOptions {
  /// Omit the hard half-space rows whose reference point lies strictly
  /// inside the obstacle; the hinge rows for those (m, t) remain.
  bool relax_penetrating_cfs = false;
};

/// Rows, in order: dynamics, mu_base, mu_recursion (zero); acceleration,
/// mu_terminal, cfs, hinge (nonneg); planar_speed, rho (soc). Throws
/// std::invalid_argument when the references do not cover the goal windows.
Subproblem build_subproblem(const Scenario& s, const Trajectory& reference, const WindowSeries& rho_ref,
                            const WindowSeries& mu_ref, const AssemblyOptions& options = {});

struct ObjectiveTerms {
  double stl = 0.0;      // -sum_k window robustness (or mu at tau_end for the surrogate)
  double control = 0.0;  // sum_t ||a_t||^2
  double obstacle = 0.0; // sum_{m,t} max(0, d_safe - phi_m(x_t))
  double total = 0.0;    // weighted sum
};

/// Exact nonsmooth objective: exact window max, exact signed distance.
ObjectiveTerms objective_terms_exact(const Scenario& s, const Trajectory& traj);
double objective_value_exact(const Scenario& s, const Trajectory& traj);

/// Smoothed objective: the robustness term uses the smooth-max recursion
/// seeded with mu = rho at tau_start.
ObjectiveTerms objective_terms_smooth(const Scenario& s, const Trajectory& traj);

/// Exact rho over each goal window.
WindowSeries rho_series(const Scenario& s, const Trajectory& traj);
/// Smooth-max running value over each window of the given rho series.
WindowSeries smooth_mu_series(const WindowSeries& rho, double alpha);

/// Decision vector for (traj, rho, mu); hinge slacks at their smallest
/// feasible value for the subproblem's linearization.
Eigen::VectorXd pack_point(const Subproblem& sub, const Scenario& s, const Trajectory& traj, const WindowSeries& rho,
                           const WindowSeries& mu);

/// Problems with P (PSD), cone bookkeeping, or unrolled mu chains carrying a
/// negative rho weight. Empty means the program is convex as assembled.
std::vector<std::string> convexity_audit(const Subproblem& sub);

/// Largest slack (eps - rho) - ||x - h|| over the rho cones whose unrolled
/// chain weight is at least `weight_threshold`; reports where it occurred.
struct TightnessReport {
  double worst_gap = 0.0;
  int goal = -1;  // 0-based
  int t = 0;
  int checked = 0;
};
TightnessReport rho_tightness(const Subproblem& sub, const Scenario& s, const Eigen::VectorXd& z,
                              double weight_threshold = 1e-3);

}  // namespace stlcfs
