#include "stlcfs/assembly.hpp"

#include <algorithm>
#include <stdexcept>

namespace stlcfs {

namespace {

struct Builder {
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> b;
  std::vector<Cone> cones;
  std::vector<RowGroup> groups;

  int rows() const { return static_cast<int>(b.size()); }

  void add(const std::string& name, const ConstraintBlock& block) {
    const int offset = rows();
    for (const ConstraintRow& row : block.rows) {
      const int r = rows();
      for (const auto& [col, val] : row.coeffs) {
        if (val != 0.0) triplets.emplace_back(r, col, val);
      }
      b.push_back(row.rhs);
    }
    groups.push_back({name, block.kind, offset, block.size()});
    if (block.size() == 0) return;
    if (block.kind == ConeKind::soc) {
      for (int d : block.soc_dims) cones.push_back({ConeKind::soc, d});
    } else if (!cones.empty() && cones.back().kind == block.kind) {
      cones.back().dim += block.size();
    } else {
      cones.push_back({block.kind, block.size()});
    }
  }
};

void check_series(const Scenario& s, const WindowSeries& series, const char* what) {
  if (series.size() != s.goals.size()) {
    throw std::invalid_argument(std::string("build_subproblem: ") + what + " has " + std::to_string(series.size()) +
                                " goals, scenario has " + std::to_string(s.goals.size()));
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (static_cast<int>(series[k].size()) != s.goals[k].window_length()) {
      throw std::invalid_argument(std::string("build_subproblem: ") + what + " for goal " + std::to_string(k) +
                                  " does not cover its window");
    }
  }
}

}  // namespace

const RowGroup* Subproblem::group(const std::string& name) const {
  for (const auto& g : groups) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

Subproblem build_subproblem(const Scenario& s, const Trajectory& reference, const WindowSeries& rho_ref,
                            const WindowSeries& mu_ref, const AssemblyOptions& options) {
  check_series(s, rho_ref, "rho_ref");
  check_series(s, mu_ref, "mu_ref");
  if (reference.T() != s.T) throw std::invalid_argument("build_subproblem: reference length differs from T");

  Subproblem sub;
  sub.layout = VariableLayout::for_scenario(s);
  const VariableLayout& L = sub.layout;
  const int K = static_cast<int>(s.goals.size());

  for (int k = 0; k < K; ++k) sub.chains.push_back(build_mu_chain(k, L, rho_ref[k], mu_ref[k], s.params.alpha));
  sub.cfs = linearize_obstacles(reference, s.obstacles);

  Builder B;
  B.add("dynamics", dynamics_constraints(s, L));
  {
    ConstraintBlock base(ConeKind::zero), rec(ConeKind::zero);
    for (const auto& c : sub.chains) {
      base.rows.insert(base.rows.end(), c.base.rows.begin(), c.base.rows.end());
      rec.rows.insert(rec.rows.end(), c.recursion.rows.begin(), c.recursion.rows.end());
    }
    B.add("mu_base", base);
    B.add("mu_recursion", rec);
  }

  const LimitBlocks limits = limit_constraints(s, L);
  B.add("acceleration", limits.acceleration);
  {
    ConstraintBlock term(ConeKind::nonneg);
    for (const auto& c : sub.chains) term.rows.insert(term.rows.end(), c.terminal.rows.begin(), c.terminal.rows.end());
    B.add("mu_terminal", term);
  }
  {
    // g . x_t + c >= 0
    ConstraintBlock cfs(ConeKind::nonneg);
    for (const auto& c : sub.cfs) {
      if (options.relax_penetrating_cfs && signed_distance(reference.x(c.t), s.obstacles[c.obstacle]) < 0.0) continue;
      auto& row = cfs.add_row(c.offset);
      for (int i = 0; i < 3; ++i) row.coeffs.emplace_back(L.x(c.t, i), -c.normal[i]);
    }
    B.add("cfs", cfs);
  }
  if (L.has_hinge()) {
    // e >= 0 and e + g . x_t + c - d_safe >= 0, per (m, t).
    ConstraintBlock hinge(ConeKind::nonneg);
    for (const auto& c : sub.cfs) {
      const int e = L.hinge(c.obstacle, c.t);
      hinge.add_row(0.0).coeffs = {{e, -1.0}};
      auto& row = hinge.add_row(c.offset - s.weights.d_safe);
      row.coeffs.emplace_back(e, -1.0);
      for (int i = 0; i < 3; ++i) row.coeffs.emplace_back(L.x(c.t, i), -c.normal[i]);
    }
    B.add("hinge", hinge);
  }

  B.add("planar_speed", limits.planar_speed);
  {
    // (eps - rho, x_t - h) in soc(4)
    ConstraintBlock cones(ConeKind::soc);
    for (int k = 0; k < K; ++k) {
      const Goal& g = s.goals[k];
      for (int t = g.tau_start; t <= g.tau_end; ++t) {
        sub.rho_cone_rows.push_back(B.rows() + cones.size());
        cones.add_row(g.epsilon).coeffs = {{L.rho(k, t), 1.0}};
        for (int i = 0; i < 3; ++i) cones.add_row(-g.center[i]).coeffs = {{L.x(t, i), -1.0}};
        cones.soc_dims.push_back(4);
      }
    }
    B.add("rho", cones);
  }

  const int n = L.size();
  ConicProgram& prog = sub.program;
  prog.A.resize(B.rows(), n);
  prog.A.setFromTriplets(B.triplets.begin(), B.triplets.end());
  prog.b = Eigen::Map<const Eigen::VectorXd>(B.b.data(), B.rows());
  prog.cones = B.cones;

  std::vector<Eigen::Triplet<double>> p;
  if (s.weights.w2 > 0.0) {
    for (int j = L.a_range().offset; j < L.a_range().end(); ++j) p.emplace_back(j, j, 2.0 * s.weights.w2);
  }
  prog.P.resize(n, n);
  prog.P.setFromTriplets(p.begin(), p.end());
  prog.q = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < K; ++k) prog.q[L.mu(k, L.tau_end(k))] = -s.weights.w1;
  for (int j = L.hinge_range().offset; j < L.hinge_range().end(); ++j) prog.q[j] = s.weights.w3;

  sub.groups = B.groups;
  return sub;
}

ObjectiveTerms objective_terms_exact(const Scenario& s, const Trajectory& traj) {
  ObjectiveTerms o;
  for (const Goal& g : s.goals) o.stl -= window_robustness_exact(traj, g);
  o.control = traj.accelerations.rowwise().squaredNorm().sum();
  for (const BoxObstacle& box : s.obstacles) {
    for (int t = 1; t <= traj.T(); ++t) o.obstacle += std::max(0.0, s.weights.d_safe - signed_distance(traj.x(t), box));
  }
  o.total = s.weights.w1 * o.stl + s.weights.w2 * o.control + s.weights.w3 * o.obstacle;
  return o;
}

double objective_value_exact(const Scenario& s, const Trajectory& traj) { return objective_terms_exact(s, traj).total; }

WindowSeries rho_series(const Scenario& s, const Trajectory& traj) {
  WindowSeries out;
  for (const Goal& g : s.goals) out.push_back(rho_window(traj, g));
  return out;
}

WindowSeries smooth_mu_series(const WindowSeries& rho, double alpha) {
  WindowSeries out;
  for (const auto& r : rho) {
    std::vector<double> mu(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) mu[i] = i == 0 ? r[0] : smooth_max(mu[i - 1], r[i], alpha);
    out.push_back(std::move(mu));
  }
  return out;
}

ObjectiveTerms objective_terms_smooth(const Scenario& s, const Trajectory& traj) {
  ObjectiveTerms o = objective_terms_exact(s, traj);
  o.stl = 0.0;
  for (const auto& mu : smooth_mu_series(rho_series(s, traj), s.params.alpha)) o.stl -= mu.back();
  o.total = s.weights.w1 * o.stl + s.weights.w2 * o.control + s.weights.w3 * o.obstacle;
  return o;
}

Eigen::VectorXd pack_point(const Subproblem& sub, const Scenario& s, const Trajectory& traj, const WindowSeries& rho,
                           const WindowSeries& mu) {
  const VariableLayout& L = sub.layout;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(L.size());
  scatter(traj, L, z);
  for (int k = 0; k < L.num_goals(); ++k) {
    for (int t = L.tau_start(k); t <= L.tau_end(k); ++t) {
      z[L.rho(k, t)] = rho[k][t - L.tau_start(k)];
      z[L.mu(k, t)] = mu[k][t - L.tau_start(k)];
    }
  }
  if (L.has_hinge()) {
    for (const auto& c : sub.cfs) {
      z[L.hinge(c.obstacle, c.t)] = std::max(0.0, s.weights.d_safe - c.evaluate(traj.x(c.t)));
    }
  }
  return z;
}

std::vector<std::string> convexity_audit(const Subproblem& sub) {
  std::vector<std::string> issues = validate_program(sub.program);
  int cone_rows = 0;
  for (const Cone& c : sub.program.cones) cone_rows += c.dim;
  int group_rows = 0;
  for (const RowGroup& g : sub.groups) group_rows += g.size;
  if (cone_rows != group_rows) issues.push_back("row groups and cones disagree on the row count");
  for (std::size_t k = 0; k < sub.chains.size(); ++k) {
    const UnrolledChain un = unroll_chain(sub.chains[k].coeffs);
    for (std::size_t i = 0; i < un.rho_weights.size(); ++i) {
      if (!(un.rho_weights[i] >= 0.0)) {
        issues.push_back("goal " + std::to_string(k) + ": negative unrolled rho weight at window offset " +
                         std::to_string(i));
      }
    }
  }
  return issues;
}

TightnessReport rho_tightness(const Subproblem& sub, const Scenario& s, const Eigen::VectorXd& z,
                              double weight_threshold) {
  TightnessReport rep;
  const VariableLayout& L = sub.layout;
  for (int k = 0; k < L.num_goals(); ++k) {
    const Goal& g = s.goals[k];
    const UnrolledChain un = unroll_chain(sub.chains[k].coeffs);
    for (int t = g.tau_start; t <= g.tau_end; ++t) {
      if (un.rho_weights[t - g.tau_start] < weight_threshold) continue;
      Eigen::Vector3d x;
      for (int i = 0; i < 3; ++i) x[i] = z[L.x(t, i)];
      const double gap = (g.epsilon - z[L.rho(k, t)]) - (x - g.center).norm();
      ++rep.checked;
      if (rep.goal < 0 || std::abs(gap) > std::abs(rep.worst_gap)) {
        rep.worst_gap = gap;
        rep.goal = k;
        rep.t = t;
      }
    }
  }
  return rep;
}

}  // namespace stlcfs
