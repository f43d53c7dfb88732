#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "stlcfs/dynamics.hpp"
#include "stlcfs/scenario.hpp"

namespace stlcfs {

/// One exact-semantics check. A check passes when margin >= -tol; margins are
/// in the check's own units (m, m/s, m/s^2). Indices are 1-based, 0 = n/a.
struct CheckResult {
  std::string name;
  bool pass = true;
  double margin = 0.0;
  int t = 0;
  int goal = 0;
  int obstacle = 0;
};

/// Segment [t, t+1] whose endpoint clearance to `obstacle` is below half the
/// segment length, so the straight segment might clip the box.
struct InterSampleRisk {
  int t = 0;
  int obstacle = 0;
  double clearance = 0.0;
  double half_length = 0.0;
};

struct VerificationReport {
  double tol = 1e-6;
  bool pass = true;
  std::vector<CheckResult> checks;
  std::vector<InterSampleRisk> inter_sample_risks;  // informational only

  const CheckResult* find(const std::string& name) const;
};

/// Checks dynamics, initial conditions, planar speed, acceleration bounds,
/// signed distance to every obstacle and exact window robustness of every
/// goal. Never throws: a trajectory of the wrong length fails "horizon".
VerificationReport verify(const Scenario& s, const Trajectory& traj, double tol = 1e-6);

/// Per goal, the prefix maxima of rho_exact over its window.
std::vector<std::vector<double>> stl_margin_trace(const Scenario& s, const Trajectory& traj);

nlohmann::json report_to_json(const VerificationReport& report);

}  // namespace stlcfs
