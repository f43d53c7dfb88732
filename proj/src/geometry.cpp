#include "stlcfs/geometry.hpp"

namespace stlcfs {

namespace {

// Per-axis signed excess of p beyond the box slab: positive outside the slab.
Eigen::Vector3d slab_excess(const Eigen::Vector3d& p, const BoxObstacle& box) {
  return (box.lower - p).cwiseMax(p - box.upper);
}

}  // namespace

double signed_distance(const Eigen::Vector3d& p, const BoxObstacle& box) {
  const Eigen::Vector3d d = slab_excess(p, box);
  if ((d.array() > 0.0).any()) return d.cwiseMax(0.0).norm();
  return d.maxCoeff();
}

Eigen::Vector3d sd_gradient(const Eigen::Vector3d& p, const BoxObstacle& box) {
  const Eigen::Vector3d d = slab_excess(p, box);
  if ((d.array() > 0.0).any()) {
    const Eigen::Vector3d closest = p.cwiseMax(box.lower).cwiseMin(box.upper);
    return (p - closest).normalized();
  }
  // Nearest face; strict '<' keeps the first face in -x, +x, -y, +y, -z, +z order.
  int best_axis = 0;
  double best_sign = -1.0;
  double best_dist = p[0] - box.lower[0];
  for (int axis = 0; axis < 3; ++axis) {
    const double to_lower = p[axis] - box.lower[axis];
    const double to_upper = box.upper[axis] - p[axis];
    if (to_lower < best_dist) {
      best_dist = to_lower;
      best_axis = axis;
      best_sign = -1.0;
    }
    if (to_upper < best_dist) {
      best_dist = to_upper;
      best_axis = axis;
      best_sign = 1.0;
    }
  }
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  g[best_axis] = best_sign;
  return g;
}

LinearizedObstacleConstraint linearize_obstacle(const Eigen::Vector3d& reference, const BoxObstacle& box,
                                                int obstacle, int t) {
  LinearizedObstacleConstraint c;
  c.obstacle = obstacle;
  c.t = t;
  c.normal = sd_gradient(reference, box);
  c.offset = signed_distance(reference, box) - c.normal.dot(reference);
  return c;
}

std::vector<LinearizedObstacleConstraint> linearize_obstacles(const Trajectory& reference,
                                                               std::span<const BoxObstacle> obstacles) {
  std::vector<LinearizedObstacleConstraint> out;
  out.reserve(obstacles.size() * static_cast<std::size_t>(reference.T()));
  for (std::size_t m = 0; m < obstacles.size(); ++m) {
    for (int t = 1; t <= reference.T(); ++t) {
      out.push_back(linearize_obstacle(reference.x(t), obstacles[m], static_cast<int>(m), t));
    }
  }
  return out;
}

}  // namespace stlcfs
