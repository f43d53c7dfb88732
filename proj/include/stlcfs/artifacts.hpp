#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "stlcfs/planner.hpp"

namespace stlcfs {

const std::vector<std::string>& robustness_csv_header();
const std::vector<std::string>& iterations_csv_header();

/// t,k,rho_exact,mu over every goal window; k is 1-based.
void write_robustness_csv(std::ostream& out, const Scenario& s, const PlanResult& result);
/// iter,exact_obj,surrogate_obj,step_inf_norm,solver_status,solve_time_s
void write_iterations_csv(std::ostream& out, const std::vector<IterationRecord>& records);

nlohmann::json summary_json(const PlanResult& result, const nlohmann::json& overrides);

/// trajectory.csv, robustness.csv, iterations.csv, report.json, summary.json.
void write_run_artifacts(const std::filesystem::path& dir, const Scenario& s, const PlanResult& result,
                         const nlohmann::json& overrides);

class MissingArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a run directory and writes fig1_path.dat (t x y z),
/// fig2_objective.dat (iter exact_obj surrogate_obj), fig3_time.dat
/// (iter solve_time_s) and fig4_mu.dat (t mu_1 .. mu_K, nan outside the
/// window). Whitespace-delimited with a one-line header.
void write_report_figures(const std::filesystem::path& dir);

}  // namespace stlcfs
