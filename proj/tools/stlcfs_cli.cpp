// stlcfs: plan, verify and report commands.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 unverified result,
// 3 infeasible or numerical failure, 4 verification failure.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "stlcfs/artifacts.hpp"
#include "stlcfs/io.hpp"
#include "stlcfs/log.hpp"
#include "stlcfs/planner.hpp"

namespace fs = std::filesystem;
using namespace stlcfs;

namespace {

enum Exit { kOk = 0, kUsage = 1, kUnverified = 2, kInfeasible = 3, kVerifyFail = 4 };

void print_violations(const ScenarioValidationError& e) {
  for (const auto& v : e.violations()) std::cerr << "  " << v.code << " (" << v.field << "): " << v.message << "\n";
}

int cmd_plan(const std::string& scenario_path, const std::string& out_dir, const std::vector<std::string>& sets,
             const std::string& dump_dir) {
  Scenario s;
  nlohmann::json overrides = nlohmann::json::object();
  try {
    nlohmann::json j = read_scenario_json(scenario_path);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) {
        std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
        return kUsage;
      }
      apply_override(j, kv.substr(0, eq), kv.substr(eq + 1));
      overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    s = scenario_from_json(j);
  } catch (const ScenarioValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    print_violations(e);
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  PlannerOptions opts;
  opts.dump_dir = dump_dir;
  opts.on_iteration = [](const IterationRecord& r) {
    log(LogLevel::info, "iteration " + std::to_string(r.iter) + ": exact " + format_double(r.exact_obj) + ", step " +
                            format_double(r.step_inf_norm) + ", solver " + to_string(r.solver_status));
  };
  const PlanResult result = plan(s, opts);
  try {
    write_run_artifacts(out_dir, s, result, overrides);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  std::cout << to_string(result.status) << ": " << result.message << "; verification "
            << (result.report.pass ? "passed" : "failed") << "\n";

  switch (result.status) {
    case PlanStatus::converged: return result.report.pass ? kOk : kUnverified;
    case PlanStatus::max_iterations:
    case PlanStatus::unverified: return kUnverified;
    case PlanStatus::infeasible:
    case PlanStatus::numerical_failure: return kInfeasible;
  }
  return kUsage;
}

int cmd_verify(const std::string& scenario_path, const std::string& csv_path, double tol) {
  Scenario s;
  Trajectory traj;
  try {
    s = load_scenario(scenario_path);
    traj = read_trajectory_csv_file(csv_path);
  } catch (const ScenarioValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    print_violations(e);
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << csv_path << ": " << e.what() << "\n";
    return kUsage;
  }
  if (traj.T() != s.T) {
    std::cerr << "error: " << csv_path << ": " << traj.T() << " data rows, scenario horizon is " << s.T << "\n";
    return kUsage;
  }
  const VerificationReport report = verify(s, traj, tol);
  std::cout << report_to_json(report).dump(2) << "\n";
  if (!report.pass) {
    for (const auto& c : report.checks) {
      if (!c.pass) std::cerr << "FAIL " << c.name << ": margin " << format_double(c.margin) << " at t=" << c.t << "\n";
    }
  }
  return report.pass ? kOk : kVerifyFail;
}

int cmd_report(const std::string& dir) {
  try {
    write_report_figures(dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  std::cout << "wrote fig1_path.dat fig2_objective.dat fig3_time.dat fig4_mu.dat to " << dir << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory planning with time-windowed reach goals and box obstacles"};
  app.require_subcommand(1);

  std::string scenario, out_dir = "run", dump_dir, traj_csv, report_dir;
  std::vector<std::string> sets;
  double tol = 1e-6;

  auto* plan_cmd = app.add_subcommand("plan", "Run the planner and write run artifacts");
  plan_cmd->add_option("scenario", scenario, "Scenario JSON file")->required();
  plan_cmd->add_option("--out,-o", out_dir, "Output directory")->capture_default_str();
  plan_cmd->add_option("--set", sets, "Override a scenario field, e.g. weights.w3=0");
  plan_cmd->add_option("--dump-programs", dump_dir, "Write every subproblem to this directory");

  auto* verify_cmd = app.add_subcommand("verify", "Check a trajectory CSV against a scenario");
  verify_cmd->add_option("scenario", scenario, "Scenario JSON file")->required();
  verify_cmd->add_option("trajectory", traj_csv, "trajectory.csv")->required();
  verify_cmd->add_option("--tol", tol, "Absolute tolerance")->capture_default_str();

  auto* report_cmd = app.add_subcommand("report", "Write plot-ready data from a run directory");
  report_cmd->add_option("dir", report_dir, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*plan_cmd) return cmd_plan(scenario, out_dir, sets, dump_dir);
  if (*verify_cmd) return cmd_verify(scenario, traj_csv, tol);
  return cmd_report(report_dir);
}
