#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "stlcfs/assembly.hpp"
#include "stlcfs/solver.hpp"
#include "stlcfs/verify.hpp"

namespace stlcfs {

enum class PlanStatus { converged, max_iterations, unverified, infeasible, numerical_failure };

std::string to_string(PlanStatus status);

/// One outer iteration. The exact objective and verification refer to the
/// realized trajectory (initial state propagated with the solver's
/// accelerations clipped to the bounds); the step compares solver positions
/// with the reference they were linearized around.
struct IterationRecord {
  int iter = 0;
  double exact_obj = 0.0;
  double surrogate_obj = 0.0;
  double step_inf_norm = 0.0;
  SolveStatus solver_status = SolveStatus::numerical_failure;
  double solve_time = 0.0;  // seconds, summed over retries
  int solver_iterations = 0;
  bool verified = false;
  bool accepted = false;    // verified and no worse than the best accepted iterate (+1e-6)
  bool retried = false;     // first solve was infeasible, re-solved with doubled w3
};

struct References {
  Trajectory trajectory;
  WindowSeries rho;
  WindowSeries mu;
};

/// Straight segments from x_init through each goal center placed at the
/// rounded midpoint of its window, held after the last anchor. Velocities
/// and accelerations are finite differences.
Trajectory initial_reference(const Scenario& s);

/// Reads x, v, a, rho and mu back out of a solution vector.
References update_references(const Eigen::VectorXd& z, const VariableLayout& layout);

/// max |x_a - x_b| over all position entries.
double step_inf_norm(const Trajectory& a, const Trajectory& b);

/// x_init and v_init propagated with accelerations clipped to +-a_max.
Trajectory realize(const Scenario& s, const Trajectory& solved);

struct PlannerOptions {
  SolverSettings solver;  // tol is taken from the scenario's solver_tol
  bool warm_start = true;
  std::filesystem::path dump_dir;  // when set, each subproblem is written as program_<iter>.txt
  std::function<void(const IterationRecord&)> on_iteration;
};

struct PlanResult {
  PlanStatus status = PlanStatus::unverified;
  Trajectory trajectory;
  WindowSeries rho;  // exact, on `trajectory`
  WindowSeries mu;   // subproblem values of the chosen iterate (reference values for iteration 0)
  std::vector<IterationRecord> iterations;
  VerificationReport report;
  int chosen_iteration = 0;  // 0 = initial reference
  std::string message;
};

/// Sequential convex outer loop. Stops when both the relative change of the
/// exact objective and the step size fall below their tolerances at a
/// verified iterate; returns the verified iterate with the lowest exact
/// objective (or the last iterate, unverified).
PlanResult plan(const Scenario& s, const PlannerOptions& options = {});

}  // namespace stlcfs
