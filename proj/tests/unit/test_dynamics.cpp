#include <doctest.h>

#include <random>

#include "stlcfs/dynamics.hpp"

using namespace stlcfs;

namespace {

Scenario small_scenario(int T) {
  Scenario s;
  s.T = T;
  s.dt = 0.5;
  s.x_init = {1, 2, 3};
  s.v_init = {0.5, -0.25, 0};
  return s;
}

Eigen::MatrixX3d random_accels(int rows, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3, 3);
  Eigen::MatrixX3d a(rows, 3);
  for (int i = 0; i < rows; ++i) a.row(i) << u(rng), u(rng), u(rng);
  return a;
}

Eigen::VectorXd residuals(const ConstraintBlock& block, const Eigen::VectorXd& z) {
  return -block_slacks(block, z);  // A z - b
}

}  // namespace

TEST_CASE("zero input holds position") {
  const Trajectory tr = propagate({0, 0, 5}, Eigen::Vector3d::Zero(), Eigen::MatrixX3d::Zero(29, 3), 1.0);
  REQUIRE(tr.T() == 30);
  for (int t = 1; t <= 30; ++t) CHECK(tr.x(t) == Eigen::Vector3d(0, 0, 5));
}

TEST_CASE("constant velocity advances one meter per step") {
  const Trajectory tr = propagate({0, 0, 5}, {1, 0, 0}, Eigen::MatrixX3d::Zero(9, 3), 1.0);
  for (int t = 1; t <= 10; ++t) CHECK(tr.x(t) == Eigen::Vector3d(t - 1, 0, 5));
}

TEST_CASE("single Euler step") {
  Eigen::MatrixX3d a = Eigen::MatrixX3d::Zero(4, 3);
  a.row(0) << 2, 0, 0;
  const Trajectory tr = propagate(Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), a, 1.0);
  CHECK(tr.v(2) == Eigen::Vector3d(2, 0, 0));
  CHECK(tr.x(2) == Eigen::Vector3d::Zero());
  CHECK(tr.x(3) == Eigen::Vector3d(2, 0, 0));
}

TEST_CASE("block dimensions depend only on T") {
  for (int T : {2, 3, 10, 30}) {
    const Scenario s = small_scenario(T);
    const VariableLayout layout(T, {}, 0, false);
    CHECK(dynamics_constraints(s, layout).size() == 6 * (T - 1) + 6);
    const LimitBlocks limits = limit_constraints(s, layout);
    CHECK(limits.planar_speed.size() == 3 * T);
    CHECK(limits.planar_speed.soc_dims.size() == static_cast<std::size_t>(T));
    CHECK(limits.acceleration.size() == 6 * (T - 1));
  }
  CHECK(dynamics_constraints(small_scenario(2), VariableLayout(2, {}, 0, false)).size() == 12);
}

TEST_CASE("propagated trajectories satisfy the equality block exactly") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int T = 2 + trial;
    const Scenario s = small_scenario(T);
    const VariableLayout layout(T, {}, 0, false);
    const Trajectory tr = propagate(s.x_init, s.v_init, random_accels(T - 1, rng), s.dt);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(layout.size());
    scatter(tr, layout, z);
    CHECK(residuals(dynamics_constraints(s, layout), z).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(max_dynamics_residual(tr, s.dt) < 1e-12);
  }
}

TEST_CASE("breaking one step shows up in exactly that step's six rows") {
  std::mt19937_64 rng(5);
  const int T = 8;
  const Scenario s = small_scenario(T);
  const VariableLayout layout(T, {}, 0, false);
  const ConstraintBlock dyn = dynamics_constraints(s, layout);
  for (int broken = 1; broken < T; ++broken) {
    Trajectory tr = propagate(s.x_init, s.v_init, random_accels(T - 1, rng), s.dt);
    // Shift all later positions (breaks only the position rows of `broken`)
    // and the acceleration of `broken` (breaks only its velocity rows).
    for (int t = broken + 1; t <= T; ++t) tr.positions.row(t - 1) += Eigen::RowVector3d(0.3, -0.2, 0.1);
    tr.accelerations.row(broken - 1) += Eigen::RowVector3d(0.7, 0.4, -0.9);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(layout.size());
    scatter(tr, layout, z);
    const Eigen::VectorXd r = residuals(dyn, z);
    for (int row = 0; row < r.size(); ++row) {
      const bool in_step = row >= 6 * (broken - 1) && row < 6 * broken;
      if (in_step) {
        CHECK(std::abs(r[row]) > 1e-3);
      } else {
        CHECK(std::abs(r[row]) < 1e-12);
      }
    }
  }
}

TEST_CASE("limit blocks: speed cone covers the plane only") {
  Scenario s = small_scenario(3);
  s.v_max = 5.0;
  s.a_max = 2.0;
  const VariableLayout layout(3, {}, 0, false);
  const LimitBlocks limits = limit_constraints(s, layout);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(layout.size());

  for (int i = 0; i < 3; ++i) z[layout.v(2, i)] = Eigen::Vector3d(3, 4, 0)[i];
  CHECK(std::abs(block_margin(limits.planar_speed, z)) < 1e-15);

  z.setZero();
  z[layout.v(1, 2)] = 99.0;
  CHECK(block_margin(limits.planar_speed, z) == doctest::Approx(5.0));

  z.setZero();
  z[layout.a(1, 0)] = 2.1;
  CHECK(block_margin(limits.acceleration, z) < 0.0);
  z[layout.a(1, 0)] = -2.0;
  CHECK(block_margin(limits.acceleration, z) == doctest::Approx(0.0));
}

TEST_CASE("scatter and gather are inverse on the kinematic block") {
  std::mt19937_64 rng(3);
  const VariableLayout layout(6, {Goal{{0, 0, 0}, 2, 4, 0.2}}, 1, true);
  const Trajectory tr = propagate({1, 1, 1}, {0, 1, 0}, random_accels(5, rng), 0.1);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(layout.size());
  scatter(tr, layout, z);
  const Trajectory back = gather(z, layout);
  CHECK(back.positions == tr.positions);
  CHECK(back.velocities == tr.velocities);
  CHECK(back.accelerations == tr.accelerations);
}
