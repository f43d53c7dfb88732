#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "stlcfs/dynamics.hpp"
#include "stlcfs/scenario.hpp"

namespace stlcfs {

/// Signed distance to a box: Euclidean distance outside, zero on the
/// boundary, minus the smallest face distance inside.
double signed_distance(const Eigen::Vector3d& p, const BoxObstacle& box);

/// Unit (sub)gradient of signed_distance. Outside it is the direction from
/// the closest box point; inside or on the boundary it is the outward normal
/// of the nearest face, ties broken in the order -x, +x, -y, +y, -z, +z.
Eigen::Vector3d sd_gradient(const Eigen::Vector3d& p, const BoxObstacle& box);

/// Half-space normal . x + offset >= 0 obtained by linearizing the signed
/// distance to obstacle `obstacle` around the reference position at step `t`.
struct LinearizedObstacleConstraint {
  int obstacle = 0;
  int t = 1;
  Eigen::Vector3d normal = Eigen::Vector3d::UnitX();
  double offset = 0.0;

  double evaluate(const Eigen::Vector3d& x) const { return normal.dot(x) + offset; }
};

LinearizedObstacleConstraint linearize_obstacle(const Eigen::Vector3d& reference, const BoxObstacle& box,
                                                int obstacle, int t);

/// One constraint per (obstacle, step), obstacle-major: entry m*T + (t-1).
std::vector<LinearizedObstacleConstraint> linearize_obstacles(const Trajectory& reference,
                                                               std::span<const BoxObstacle> obstacles);

}  // namespace stlcfs
