#pragma once

#include <vector>

#include "stlcfs/scenario.hpp"

namespace stlcfs {

struct IndexRange {
  int offset = 0;
  int size = 0;
  int end() const { return offset + size; }
};

/// Column layout of the stacked decision vector, in the fixed order
/// x (3T), v (3T), a (3(T-1)), rho per goal window, mu per goal window,
/// hinge slacks e per (obstacle, step). Time indices are 1-based; goal and
/// obstacle indices are 0-based.
class VariableLayout {
 public:
  VariableLayout() = default;
  VariableLayout(int T, const std::vector<Goal>& goals, int num_obstacles, bool with_hinge);
  static VariableLayout for_scenario(const Scenario& s);

  int T() const { return T_; }
  int num_goals() const { return static_cast<int>(windows_.size()); }
  int num_obstacles() const { return M_; }
  bool has_hinge() const { return hinge_.size > 0; }

  int x(int t, int axis) const { return x_.offset + 3 * (t - 1) + axis; }
  int v(int t, int axis) const { return v_.offset + 3 * (t - 1) + axis; }
  int a(int t, int axis) const { return a_.offset + 3 * (t - 1) + axis; }
  int rho(int k, int t) const { return rho_[k].offset + (t - windows_[k].first); }
  int mu(int k, int t) const { return mu_[k].offset + (t - windows_[k].first); }
  int hinge(int m, int t) const { return hinge_.offset + m * T_ + (t - 1); }

  int tau_start(int k) const { return windows_[k].first; }
  int tau_end(int k) const { return windows_[k].second; }

  const IndexRange& x_range() const { return x_; }
  const IndexRange& v_range() const { return v_; }
  const IndexRange& a_range() const { return a_; }
  const IndexRange& rho_range(int k) const { return rho_[k]; }
  const IndexRange& mu_range(int k) const { return mu_[k]; }
  const IndexRange& hinge_range() const { return hinge_; }

  /// Every range in layout order (x, v, a, rho..., mu..., hinge).
  std::vector<IndexRange> ranges() const;
  int size() const { return size_; }

 private:
  int T_ = 0;
  int M_ = 0;
  std::vector<std::pair<int, int>> windows_;
  IndexRange x_, v_, a_, hinge_;
  std::vector<IndexRange> rho_, mu_;
  int size_ = 0;
};

}  // namespace stlcfs
