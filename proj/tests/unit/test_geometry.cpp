#include <doctest.h>

#include <cmath>
#include <random>

#include "geometry_oracle.hpp"
#include "stlcfs/geometry.hpp"

using namespace stlcfs;

namespace {

const BoxObstacle kO1{{10, 5, 0}, {15, 15, 15}};

BoxObstacle random_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(-10, 10);
  std::uniform_real_distribution<double> w(0.1, 8);
  const Eigen::Vector3d lo(c(rng), c(rng), c(rng));
  return {lo, lo + Eigen::Vector3d(w(rng), w(rng), w(rng))};
}

Eigen::Vector3d random_point(std::mt19937_64& rng, double range = 20) {
  std::uniform_real_distribution<double> u(-range, range);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("signed distance: boundary, outside and inside values") {
  CHECK(signed_distance({10, 5, 5}, kO1) == 0.0);

  // Outside oracle: dense sampling of the box surface (spacing 0.05 m).
  const double sampled = oracle::surface_distance_by_sampling({0, 0, 5}, kO1, 301);
  CHECK(sampled == doctest::Approx(std::sqrt(125.0)).epsilon(1e-9));
  CHECK(signed_distance({0, 0, 5}, kO1) == doctest::Approx(sampled).epsilon(1e-12));
  CHECK(signed_distance({0, 0, 5}, kO1) == doctest::Approx(11.180339887498949).epsilon(1e-15));

  // Inside oracle: minus the smallest per-face distance.
  const Eigen::Vector3d center(12.5, 10, 7.5);
  CHECK(oracle::min_face_distance(center, kO1) == 2.5);
  CHECK(signed_distance(center, kO1) == -2.5);
}

TEST_CASE("signed distance agrees with both oracles on random points") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const BoxObstacle box = random_box(rng);
    const Eigen::Vector3d p = random_point(rng);
    const double sd = signed_distance(p, box);
    if (oracle::strictly_inside(p, box)) {
      CHECK(sd == doctest::Approx(-oracle::min_face_distance(p, box)).epsilon(1e-12));
    } else {
      // Sampling over-estimates by at most the grid half-diagonal.
      const double sampled = oracle::surface_distance_by_sampling(p, box, 81);
      const double spacing = (box.upper - box.lower).maxCoeff() / 80.0;
      CHECK(sd <= sampled + 1e-12);
      CHECK(sd >= sampled - spacing);
    }
  }
}

TEST_CASE("gradient examples and tie-breaking") {
  const Eigen::Vector3d g = sd_gradient({0, 0, 5}, kO1);
  CHECK((g - Eigen::Vector3d(-10, -5, 0) / std::sqrt(125.0)).norm() < 1e-15);

  CHECK(sd_gradient({12.4, 10, 7.5}, kO1) == Eigen::Vector3d(-1, 0, 0));
  // Equidistant (2.5 m) to x=10, x=15 and y=5: -x wins.
  CHECK(sd_gradient({12.5, 7.5, 7.5}, kO1) == Eigen::Vector3d(-1, 0, 0));
  CHECK(sd_gradient({12.5, 12.6, 7.5}, kO1) == Eigen::Vector3d(0, 1, 0));
  // Cube center: all six faces equidistant.
  const BoxObstacle cube{{-1, -1, -1}, {1, 1, 1}};
  CHECK(sd_gradient({0, 0, 0}, cube) == Eigen::Vector3d(-1, 0, 0));
  // On an edge of O1.
  CHECK(sd_gradient({10, 5, 5}, kO1) == Eigen::Vector3d(-1, 0, 0));
  CHECK(sd_gradient({15, 10, 15}, kO1) == Eigen::Vector3d(1, 0, 0));
}

TEST_CASE("gradient is unit length and matches central differences outside") {
  std::mt19937_64 rng(33);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const BoxObstacle box = random_box(rng);
    const Eigen::Vector3d p = random_point(rng);
    const Eigen::Vector3d g = sd_gradient(p, box);
    CHECK(std::abs(g.norm() - 1.0) < 1e-12);
    if (signed_distance(p, box) < 1e-2) continue;  // smooth region only
    const double h = 1e-6;
    Eigen::Vector3d fd;
    for (int axis = 0; axis < 3; ++axis) {
      Eigen::Vector3d e = Eigen::Vector3d::Zero();
      e[axis] = h;
      fd[axis] = (signed_distance(p + e, box) - signed_distance(p - e, box)) / (2 * h);
    }
    CHECK((fd - g).cwiseAbs().maxCoeff() < 1e-5);
    ++checked;
  }
  CHECK(checked > 1000);
}

TEST_CASE("linearization is exact at the reference and tangent on the boundary") {
  const LinearizedObstacleConstraint c = linearize_obstacle({0, 0, 5}, kO1, 0, 1);
  CHECK(c.evaluate({0, 0, 5}) == doctest::Approx(std::sqrt(125.0)).epsilon(1e-15));

  const LinearizedObstacleConstraint b = linearize_obstacle({10, 10, 5}, kO1, 0, 1);
  CHECK(b.normal == Eigen::Vector3d(-1, 0, 0));
  CHECK(b.offset == 10.0);  // half-space x <= 10
  CHECK(b.evaluate({10, -40, 99}) == 0.0);
}

TEST_CASE("linearized signed distance under-estimates and is sound") {
  std::mt19937_64 rng(44);
  int satisfied = 0;
  for (int i = 0; i < 10000; ++i) {
    const BoxObstacle box = random_box(rng);
    const Eigen::Vector3d ref = random_point(rng);
    const Eigen::Vector3d query = random_point(rng);
    const LinearizedObstacleConstraint c = linearize_obstacle(ref, box, 0, 1);
    CHECK(std::abs(c.normal.norm() - 1.0) < 1e-9);
    CHECK(std::abs(c.evaluate(ref) - signed_distance(ref, box)) < 1e-12);
    const double lin = c.evaluate(query);
    const double exact = signed_distance(query, box);
    CHECK(lin <= exact + 1e-9);
    if (lin >= 0.0) {
      ++satisfied;
      CHECK(exact >= -1e-9);
    }
  }
  CHECK(satisfied > 1000);
}

TEST_CASE("linearize_obstacles emits one constraint per obstacle and step") {
  Trajectory tr;
  tr.positions = Eigen::MatrixX3d::Zero(4, 3);
  tr.velocities = Eigen::MatrixX3d::Zero(4, 3);
  tr.accelerations = Eigen::MatrixX3d::Zero(3, 3);
  const std::vector<BoxObstacle> boxes{kO1, {{30, 20, 0}, {40, 30, 20}}};
  const auto cs = linearize_obstacles(tr, boxes);
  REQUIRE(cs.size() == 8);
  CHECK(cs[5].obstacle == 1);
  CHECK(cs[5].t == 2);
}
