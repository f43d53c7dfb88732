#include "stlcfs/dynamics.hpp"

#include <algorithm>
#include <cassert>

namespace stlcfs {

Trajectory propagate(const Eigen::Vector3d& x_init, const Eigen::Vector3d& v_init,
                     const Eigen::MatrixX3d& accels, double dt) {
  const int T = static_cast<int>(accels.rows()) + 1;
  Trajectory traj;
  traj.positions.resize(T, 3);
  traj.velocities.resize(T, 3);
  traj.accelerations = accels;
  traj.positions.row(0) = x_init.transpose();
  traj.velocities.row(0) = v_init.transpose();
  for (int i = 0; i + 1 < T; ++i) {
    traj.positions.row(i + 1) = traj.positions.row(i) + traj.velocities.row(i) * dt;
    traj.velocities.row(i + 1) = traj.velocities.row(i) + traj.accelerations.row(i) * dt;
  }
  return traj;
}

double max_dynamics_residual(const Trajectory& traj, double dt) {
  double worst = 0.0;
  for (int i = 0; i + 1 < traj.T(); ++i) {
    const auto rx = traj.positions.row(i + 1) - traj.positions.row(i) - traj.velocities.row(i) * dt;
    const auto rv = traj.velocities.row(i + 1) - traj.velocities.row(i) - traj.accelerations.row(i) * dt;
    worst = std::max({worst, rx.cwiseAbs().maxCoeff(), rv.cwiseAbs().maxCoeff()});
  }
  return worst;
}

void scatter(const Trajectory& traj, const VariableLayout& layout, Eigen::VectorXd& z) {
  assert(traj.T() == layout.T());
  for (int t = 1; t <= layout.T(); ++t) {
    for (int i = 0; i < 3; ++i) {
      z[layout.x(t, i)] = traj.positions(t - 1, i);
      z[layout.v(t, i)] = traj.velocities(t - 1, i);
      if (t < layout.T()) z[layout.a(t, i)] = traj.accelerations(t - 1, i);
    }
  }
}

Trajectory gather(const Eigen::VectorXd& z, const VariableLayout& layout) {
  const int T = layout.T();
  Trajectory traj;
  traj.positions.resize(T, 3);
  traj.velocities.resize(T, 3);
  traj.accelerations.resize(T - 1, 3);
  for (int t = 1; t <= T; ++t) {
    for (int i = 0; i < 3; ++i) {
      traj.positions(t - 1, i) = z[layout.x(t, i)];
      traj.velocities(t - 1, i) = z[layout.v(t, i)];
      if (t < T) traj.accelerations(t - 1, i) = z[layout.a(t, i)];
    }
  }
  return traj;
}

ConstraintBlock dynamics_constraints(const Scenario& s, const VariableLayout& layout) {
  ConstraintBlock block(ConeKind::zero);
  block.rows.reserve(6 * s.T);
  for (int t = 1; t < s.T; ++t) {
    for (int i = 0; i < 3; ++i) {
      // x[t+1] - x[t] - dt v[t] = 0
      auto& row = block.add_row(0.0);
      row.coeffs = {{layout.x(t + 1, i), 1.0}, {layout.x(t, i), -1.0}, {layout.v(t, i), -s.dt}};
    }
    for (int i = 0; i < 3; ++i) {
      // v[t+1] - v[t] - dt a[t] = 0
      auto& row = block.add_row(0.0);
      row.coeffs = {{layout.v(t + 1, i), 1.0}, {layout.v(t, i), -1.0}, {layout.a(t, i), -s.dt}};
    }
  }
  for (int i = 0; i < 3; ++i) block.add_row(s.x_init[i]).coeffs = {{layout.x(1, i), 1.0}};
  for (int i = 0; i < 3; ++i) block.add_row(s.v_init[i]).coeffs = {{layout.v(1, i), 1.0}};
  return block;
}

LimitBlocks limit_constraints(const Scenario& s, const VariableLayout& layout) {
  LimitBlocks out;
  for (int t = 1; t <= s.T; ++t) {
    out.planar_speed.add_row(s.v_max);
    out.planar_speed.add_row(0.0).coeffs = {{layout.v(t, 0), -1.0}};
    out.planar_speed.add_row(0.0).coeffs = {{layout.v(t, 1), -1.0}};
    out.planar_speed.soc_dims.push_back(3);
  }
  for (int t = 1; t < s.T; ++t) {
    for (int i = 0; i < 3; ++i) {
      out.acceleration.add_row(s.a_max).coeffs = {{layout.a(t, i), 1.0}};   // a_max - a >= 0
      out.acceleration.add_row(s.a_max).coeffs = {{layout.a(t, i), -1.0}};  // a_max + a >= 0
    }
  }
  return out;
}

}  // namespace stlcfs
