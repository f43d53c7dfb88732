#include "stlcfs/planner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "stlcfs/log.hpp"

namespace stlcfs {

std::string to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::converged: return "converged";
    case PlanStatus::max_iterations: return "max_iterations";
    case PlanStatus::unverified: return "unverified";
    case PlanStatus::infeasible: return "infeasible";
    case PlanStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

Trajectory initial_reference(const Scenario& s) {
  const int T = s.T;
  Trajectory tr;
  tr.positions.resize(T, 3);
  tr.positions.row(0) = s.x_init.transpose();
  int last_t = 1;
  Eigen::Vector3d last_p = s.x_init;
  for (const Goal& g : s.goals) {
    const int t = static_cast<int>(std::lround(0.5 * (g.tau_start + g.tau_end)));
    if (t <= last_t) {
      // Anchor not after the previous one: jump there, keep file order.
      tr.positions.row(t - 1) = g.center.transpose();
    } else {
      for (int u = last_t + 1; u <= t; ++u) {
        const double w = static_cast<double>(u - last_t) / (t - last_t);
        tr.positions.row(u - 1) = ((1.0 - w) * last_p + w * g.center).transpose();
      }
    }
    last_t = std::max(last_t, t);
    last_p = g.center;
  }
  for (int u = last_t + 1; u <= T; ++u) tr.positions.row(u - 1) = last_p.transpose();

  tr.velocities.resize(T, 3);
  for (int t = 1; t < T; ++t) tr.velocities.row(t - 1) = (tr.positions.row(t) - tr.positions.row(t - 1)) / s.dt;
  tr.velocities.row(T - 1) = tr.velocities.row(T - 2);
  tr.accelerations.resize(T - 1, 3);
  for (int t = 1; t < T; ++t) tr.accelerations.row(t - 1) = (tr.velocities.row(t) - tr.velocities.row(t - 1)) / s.dt;
  return tr;
}

References update_references(const Eigen::VectorXd& z, const VariableLayout& layout) {
  References r;
  r.trajectory = gather(z, layout);
  for (int k = 0; k < layout.num_goals(); ++k) {
    const IndexRange& rr = layout.rho_range(k);
    const IndexRange& mr = layout.mu_range(k);
    r.rho.emplace_back(z.data() + rr.offset, z.data() + rr.end());
    r.mu.emplace_back(z.data() + mr.offset, z.data() + mr.end());
  }
  return r;
}

double step_inf_norm(const Trajectory& a, const Trajectory& b) {
  return (a.positions - b.positions).cwiseAbs().maxCoeff();
}

Trajectory realize(const Scenario& s, const Trajectory& solved) {
  const Eigen::MatrixX3d a = solved.accelerations.cwiseMax(-s.a_max).cwiseMin(s.a_max);
  return propagate(s.x_init, s.v_init, a, s.dt);
}

namespace {

struct Attempt {
  SolveResult result;
  Subproblem sub;
};

Attempt solve_at(const Scenario& s, const References& ref, const SolverSettings& settings, const WarmStart* warm,
                 const AssemblyOptions& assembly = {}) {
  Attempt at{SolveResult{}, build_subproblem(s, ref.trajectory, ref.rho, ref.mu, assembly)};
  at.result = solve(at.sub.program, settings, warm);
  return at;
}

}  // namespace

PlanResult plan(const Scenario& s, const PlannerOptions& options) {
  SolverSettings settings = options.solver;
  settings.tol = s.params.solver_tol;

  PlanResult out;
  References ref;
  ref.trajectory = initial_reference(s);
  ref.rho = rho_series(s, ref.trajectory);
  ref.mu = ref.rho;

  Trajectory last = ref.trajectory;
  WindowSeries last_mu = ref.mu;
  int last_iter = 0;
  double best_obj = std::numeric_limits<double>::infinity();
  double prev_obj = std::numeric_limits<double>::quiet_NaN();
  bool have_best = false;
  bool converged = false;
  bool failed = false;
  WarmStart warm;
  bool have_warm = false;

  for (int i = 1; i <= s.params.max_outer_iters; ++i) {
    IterationRecord rec;
    rec.iter = i;
    Attempt at = solve_at(s, ref, settings, options.warm_start && have_warm ? &warm : nullptr);
    rec.solve_time = at.result.solve_time;
    rec.solver_iterations = at.result.iterations;
    if (at.result.status == SolveStatus::infeasible_detected) {
      log(LogLevel::info, "iteration " + std::to_string(i) + ": subproblem infeasible, retrying with doubled w3 and penetrating half-spaces relaxed");
      Scenario retry = s;
      retry.weights.w3 *= 2.0;
      at = solve_at(retry, ref, settings, nullptr, AssemblyOptions{true});
      rec.retried = true;
      rec.solve_time += at.result.solve_time;
      rec.solver_iterations += at.result.iterations;
    }
    rec.solver_status = at.result.status;
    if (!options.dump_dir.empty()) {
      std::filesystem::create_directories(options.dump_dir);
      std::ofstream dump(options.dump_dir / ("program_" + std::to_string(i) + ".txt"));
      dump_program(at.sub.program, dump);
    }

    if (at.result.status == SolveStatus::infeasible_detected || at.result.status == SolveStatus::numerical_failure) {
      rec.exact_obj = std::numeric_limits<double>::quiet_NaN();
      rec.surrogate_obj = std::numeric_limits<double>::quiet_NaN();
      rec.step_inf_norm = std::numeric_limits<double>::quiet_NaN();
      out.iterations.push_back(rec);
      if (options.on_iteration) options.on_iteration(rec);
      out.status = at.result.status == SolveStatus::infeasible_detected ? PlanStatus::infeasible
                                                                        : PlanStatus::numerical_failure;
      out.message = "iteration " + std::to_string(i) + ": solver reported " + to_string(at.result.status);
      log(LogLevel::error, out.message);
      failed = true;
      break;
    }
    if (at.result.status == SolveStatus::max_iters) {
      log(LogLevel::info, "iteration " + std::to_string(i) + ": solver hit its iteration cap, using the last iterate");
    }

    References next = update_references(at.result.z, at.sub.layout);
    const Trajectory realized = realize(s, next.trajectory);
    rec.exact_obj = objective_value_exact(s, realized);
    rec.surrogate_obj = at.result.objective;
    rec.step_inf_norm = step_inf_norm(next.trajectory, ref.trajectory);
    rec.verified = verify(s, realized).pass;
    rec.accepted = rec.verified && rec.exact_obj <= best_obj + 1e-6;
    out.iterations.push_back(rec);
    if (options.on_iteration) options.on_iteration(rec);

    if (log_level() >= LogLevel::debug) {
      const TightnessReport tight = rho_tightness(at.sub, s, at.result.z);
      std::ostringstream msg;
      msg << "iteration " << i << ": J=" << rec.exact_obj << " surrogate=" << rec.surrogate_obj
          << " step=" << rec.step_inf_norm << " verified=" << rec.verified << " solver_iters=" << rec.solver_iterations
          << " rho_gap=" << tight.worst_gap << " residuals=(" << at.result.primal_residual << ", "
          << at.result.dual_residual << ", " << at.result.duality_gap << ")";
      log(LogLevel::debug, msg.str());
    }
    if (i > 2 && rec.exact_obj > prev_obj + 1e-6) {
      log(LogLevel::info, "iteration " + std::to_string(i) + ": exact objective increased");
    }

    last = realized;
    last_mu = next.mu;
    last_iter = i;
    if (rec.verified && rec.exact_obj < best_obj) {
      best_obj = rec.exact_obj;
      out.trajectory = realized;
      out.mu = next.mu;
      out.chosen_iteration = i;
      have_best = true;
    }

    const bool cost_settled =
        i >= 2 && std::abs(rec.exact_obj - prev_obj) / std::max(1.0, std::abs(prev_obj)) < s.params.cost_rel_tol;
    if (cost_settled && rec.step_inf_norm < s.params.step_tol && rec.verified) {
      converged = true;
      break;
    }

    prev_obj = rec.exact_obj;
    warm = WarmStart{at.result.z, at.result.s, at.result.y, at.result.rho};
    have_warm = !rec.retried;
    ref = std::move(next);
  }

  if (!have_best) {
    out.trajectory = last;
    out.mu = last_mu;
    out.chosen_iteration = last_iter;
  }
  if (!failed) {
    out.status = converged ? PlanStatus::converged : have_best ? PlanStatus::max_iterations : PlanStatus::unverified;
    out.message = to_string(out.status) + " after " + std::to_string(out.iterations.size()) + " iterations";
  }
  out.rho = rho_series(s, out.trajectory);
  out.report = verify(s, out.trajectory);
  return out;
}

}  // namespace stlcfs
