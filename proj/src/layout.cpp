#include <cmath>
#include <limits>

#include "stlcfs/constraint_block.hpp"
#include "stlcfs/layout.hpp"

namespace stlcfs {

VariableLayout::VariableLayout(int T, const std::vector<Goal>& goals, int num_obstacles, bool with_hinge)
    : T_(T), M_(num_obstacles) {
  int next = 0;
  auto take = [&next](int n) {
    IndexRange r{next, n};
    next += n;
    return r;
  };
  x_ = take(3 * T);
  v_ = take(3 * T);
  a_ = take(3 * (T - 1));
  for (const Goal& g : goals) {
    windows_.emplace_back(g.tau_start, g.tau_end);
    rho_.push_back(take(g.window_length()));
  }
  for (const Goal& g : goals) mu_.push_back(take(g.window_length()));
  hinge_ = take(with_hinge ? num_obstacles * T : 0);
  size_ = next;
}

VariableLayout VariableLayout::for_scenario(const Scenario& s) {
  return VariableLayout(s.T, s.goals, static_cast<int>(s.obstacles.size()), s.weights.w3 > 0.0);
}

std::vector<IndexRange> VariableLayout::ranges() const {
  std::vector<IndexRange> out{x_, v_, a_};
  out.insert(out.end(), rho_.begin(), rho_.end());
  out.insert(out.end(), mu_.begin(), mu_.end());
  out.push_back(hinge_);
  return out;
}

Eigen::VectorXd block_slacks(const ConstraintBlock& block, const Eigen::VectorXd& z) {
  Eigen::VectorXd s(block.size());
  for (int i = 0; i < block.size(); ++i) s[i] = block.rows[i].slack(z);
  return s;
}

double block_margin(const ConstraintBlock& block, const Eigen::VectorXd& z) {
  double margin = std::numeric_limits<double>::infinity();
  const Eigen::VectorXd s = block_slacks(block, z);
  switch (block.kind) {
    case ConeKind::zero:
      for (int i = 0; i < s.size(); ++i) margin = std::min(margin, -std::abs(s[i]));
      break;
    case ConeKind::nonneg:
      for (int i = 0; i < s.size(); ++i) margin = std::min(margin, s[i]);
      break;
    case ConeKind::soc: {
      int row = 0;
      for (int dim : block.soc_dims) {
        margin = std::min(margin, s[row] - s.segment(row + 1, dim - 1).norm());
        row += dim;
      }
      break;
    }
  }
  return margin;
}

}  // namespace stlcfs
