#include "stlcfs/artifacts.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "stlcfs/io.hpp"

namespace stlcfs {

namespace fs = std::filesystem;

namespace {

void write_header(std::ostream& out, const std::vector<std::string>& h, char sep) {
  for (std::size_t i = 0; i < h.size(); ++i) out << (i ? std::string(1, sep) : "") << h[i];
  out << "\n";
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

fs::path require(const fs::path& dir, const char* name) {
  const fs::path p = dir / name;
  if (!fs::is_regular_file(p)) throw MissingArtifactError("missing artifact " + p.string());
  return p;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

const std::vector<std::string>& robustness_csv_header() {
  static const std::vector<std::string> h{"t", "k", "rho_exact", "mu"};
  return h;
}

const std::vector<std::string>& iterations_csv_header() {
  static const std::vector<std::string> h{"iter",          "exact_obj",    "surrogate_obj",
                                          "step_inf_norm", "solver_status", "solve_time_s"};
  return h;
}

void write_robustness_csv(std::ostream& out, const Scenario& s, const PlanResult& result) {
  write_header(out, robustness_csv_header(), ',');
  for (std::size_t k = 0; k < s.goals.size(); ++k) {
    const Goal& g = s.goals[k];
    for (int t = g.tau_start; t <= g.tau_end; ++t) {
      const std::size_t i = static_cast<std::size_t>(t - g.tau_start);
      out << t << "," << k + 1 << "," << format_double(result.rho[k][i]) << "," << format_double(result.mu[k][i])
          << "\n";
    }
  }
}

void write_iterations_csv(std::ostream& out, const std::vector<IterationRecord>& records) {
  write_header(out, iterations_csv_header(), ',');
  for (const auto& r : records) {
    out << r.iter << "," << format_double(r.exact_obj) << "," << format_double(r.surrogate_obj) << ","
        << format_double(r.step_inf_norm) << "," << to_string(r.solver_status) << "," << format_double(r.solve_time)
        << "\n";
  }
}

nlohmann::json summary_json(const PlanResult& result, const nlohmann::json& overrides) {
  double total_time = 0.0;
  for (const auto& r : result.iterations) total_time += r.solve_time;
  const double final_obj = result.iterations.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                     : result.iterations.back().exact_obj;
  double chosen_obj = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : result.iterations) {
    if (r.iter == result.chosen_iteration) chosen_obj = r.exact_obj;
  }
  return {{"status", to_string(result.status)},
          {"pass", result.report.pass},
          {"message", result.message},
          {"outer_iterations", result.iterations.size()},
          {"chosen_iteration", result.chosen_iteration},
          {"chosen_exact_obj", number_or_null(chosen_obj)},
          {"last_exact_obj", number_or_null(final_obj)},
          {"total_solve_time_s", total_time},
          {"overrides", overrides.is_null() ? nlohmann::json::object() : overrides}};
}

void write_run_artifacts(const fs::path& dir, const Scenario& s, const PlanResult& result,
                         const nlohmann::json& overrides) {
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "trajectory.csv");
    write_trajectory_csv(out, result.trajectory);
  }
  {
    auto out = open_out(dir / "robustness.csv");
    write_robustness_csv(out, s, result);
  }
  {
    auto out = open_out(dir / "iterations.csv");
    write_iterations_csv(out, result.iterations);
  }
  open_out(dir / "report.json") << report_to_json(result.report).dump(2) << "\n";
  open_out(dir / "summary.json") << summary_json(result, overrides).dump(2) << "\n";
}

void write_report_figures(const fs::path& dir) {
  const CsvTable traj = read_csv_file(require(dir, "trajectory.csv"), trajectory_csv_header());
  const CsvTable iters = read_csv_file(require(dir, "iterations.csv"), iterations_csv_header());
  const CsvTable rob = read_csv_file(require(dir, "robustness.csv"), robustness_csv_header());
  require(dir, "report.json");
  require(dir, "summary.json");

  {
    auto out = open_out(dir / "fig1_path.dat");
    out << "t x y z\n";
    for (const auto& r : traj.rows) out << r[0] << " " << r[1] << " " << r[2] << " " << r[3] << "\n";
  }
  {
    auto out = open_out(dir / "fig2_objective.dat");
    out << "iter exact_obj surrogate_obj\n";
    for (const auto& r : iters.rows) out << r[0] << " " << r[1] << " " << r[2] << "\n";
  }
  {
    auto out = open_out(dir / "fig3_time.dat");
    out << "iter solve_time_s\n";
    for (const auto& r : iters.rows) out << r[0] << " " << r[5] << "\n";
  }
  {
    const int T = static_cast<int>(traj.rows.size());
    int K = 0;
    std::map<std::pair<int, int>, std::string> mu;  // (t, k) -> value
    for (std::size_t i = 0; i < rob.rows.size(); ++i) {
      const int line = static_cast<int>(i) + 2;
      const int t = static_cast<int>(parse_csv_double(rob.rows[i][0], line, 1));
      const int k = static_cast<int>(parse_csv_double(rob.rows[i][1], line, 2));
      K = std::max(K, k);
      mu[{t, k}] = rob.rows[i][3];
    }
    auto out = open_out(dir / "fig4_mu.dat");
    out << "t";
    for (int k = 1; k <= K; ++k) out << " mu_" << k;
    out << "\n";
    for (int t = 1; t <= T; ++t) {
      out << t;
      for (int k = 1; k <= K; ++k) {
        const auto it = mu.find({t, k});
        out << " " << (it == mu.end() ? "nan" : it->second);
      }
      out << "\n";
    }
  }
}

}  // namespace stlcfs
