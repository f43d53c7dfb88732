#pragma once

#include <Eigen/Core>

#include "stlcfs/constraint_block.hpp"
#include "stlcfs/layout.hpp"
#include "stlcfs/scenario.hpp"

namespace stlcfs {

/// Sampled double-integrator trajectory. Row t-1 holds step t (1-based);
/// accelerations has T-1 rows.
struct Trajectory {
  Eigen::MatrixX3d positions;
  Eigen::MatrixX3d velocities;
  Eigen::MatrixX3d accelerations;

  int T() const { return static_cast<int>(positions.rows()); }
  Eigen::Vector3d x(int t) const { return positions.row(t - 1).transpose(); }
  Eigen::Vector3d v(int t) const { return velocities.row(t - 1).transpose(); }
  Eigen::Vector3d a(int t) const { return accelerations.row(t - 1).transpose(); }
};

/// Forward Euler recursion x[t+1] = x[t] + v[t] dt, v[t+1] = v[t] + a[t] dt.
Trajectory propagate(const Eigen::Vector3d& x_init, const Eigen::Vector3d& v_init,
                     const Eigen::MatrixX3d& accels, double dt);

/// Largest absolute violation of the Euler recursion over the horizon.
double max_dynamics_residual(const Trajectory& traj, double dt);

/// Writes the trajectory into the x/v/a columns of z.
void scatter(const Trajectory& traj, const VariableLayout& layout, Eigen::VectorXd& z);
Trajectory gather(const Eigen::VectorXd& z, const VariableLayout& layout);

/// Zero-cone block: 6(T-1) recursion rows (per step: 3 position, 3 velocity)
/// followed by 6 initial-condition rows (x[1] = x_init, v[1] = v_init).
ConstraintBlock dynamics_constraints(const Scenario& s, const VariableLayout& layout);

struct LimitBlocks {
  ConstraintBlock planar_speed{ConeKind::soc};  // (v_max, vx[t], vy[t]) per t in [1, T]
  ConstraintBlock acceleration{ConeKind::nonneg};  // a_max -/+ a per axis per t in [1, T-1]
};

/// Planar speed cones and per-axis acceleration bounds. Vertical speed is
/// deliberately left unconstrained.
LimitBlocks limit_constraints(const Scenario& s, const VariableLayout& layout);

}  // namespace stlcfs
