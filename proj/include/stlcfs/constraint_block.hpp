#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace stlcfs {

enum class ConeKind { zero, nonneg, soc };

/// One row of the standard form A z + s = b, i.e. the slack
/// s = rhs - sum(coeff * z) must lie in the row's cone.
struct ConstraintRow {
  std::vector<std::pair<int, double>> coeffs;
  double rhs = 0.0;

  double slack(const Eigen::VectorXd& z) const {
    double acc = rhs;
    for (const auto& [col, val] : coeffs) acc -= val * z[col];
    return acc;
  }
};

/// Rows sharing one cone kind. For soc blocks `soc_dims` partitions the rows
/// into consecutive cones (head row first); it is empty otherwise.
struct ConstraintBlock {
  ConeKind kind = ConeKind::zero;
  std::vector<ConstraintRow> rows;
  std::vector<int> soc_dims;

  explicit ConstraintBlock(ConeKind k = ConeKind::zero) : kind(k) {}

  ConstraintRow& add_row(double rhs) {
    rows.push_back({{}, rhs});
    return rows.back();
  }
  int size() const { return static_cast<int>(rows.size()); }
};

/// Smallest cone margin over a block at z: min slack for nonneg rows,
/// min (t - ||u||) over soc cones, and -max |slack| for zero rows.
/// Nonnegative margin means feasible. Empty blocks return +inf.
double block_margin(const ConstraintBlock& block, const Eigen::VectorXd& z);

/// Per-row slack values of a block at z.
Eigen::VectorXd block_slacks(const ConstraintBlock& block, const Eigen::VectorXd& z);

}  // namespace stlcfs
