#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace stlcfs {

/// Time-windowed "eventually reach" target: be within `epsilon` of `center`
/// at some step in [tau_start, tau_end] (1-based, inclusive).
struct Goal {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  int tau_start = 1;
  int tau_end = 1;
  double epsilon = 0.2;

  int window_length() const { return tau_end - tau_start + 1; }
};

/// Closed axis-aligned box [lower, upper].
struct BoxObstacle {
  Eigen::Vector3d lower = Eigen::Vector3d::Zero();
  Eigen::Vector3d upper = Eigen::Vector3d::Ones();
};

struct Weights {
  double w1 = 10.0;  // robustness reward
  double w2 = 0.1;   // control effort
  double w3 = 5.0;   // obstacle-proximity hinge
  double d_safe = 0.5;
};

struct AlgorithmParams {
  double alpha = 0.1;
  int max_outer_iters = 20;
  double step_tol = 1e-3;
  double cost_rel_tol = 1e-3;
  double solver_tol = 1e-6;
};

struct Scenario {
  int T = 30;
  double dt = 1.0;
  Eigen::Vector3d x_init = Eigen::Vector3d::Zero();
  Eigen::Vector3d v_init = Eigen::Vector3d::Zero();
  double v_max = 5.0;
  double a_max = 2.0;
  std::vector<Goal> goals;
  std::vector<BoxObstacle> obstacles;
  Weights weights;
  AlgorithmParams params;
};

struct Violation {
  std::string code;   // machine-readable, e.g. "degenerate_obstacle"
  std::string field;  // dotted path, e.g. "obstacles[1]"
  std::string message;
};

/// Total function: returns every violated invariant (empty means valid).
std::vector<Violation> validate(const Scenario& s);

/// Malformed file or JSON shape.
class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed file whose contents break a Scenario invariant.
class ScenarioValidationError : public std::runtime_error {
 public:
  explicit ScenarioValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

/// Parses the file into JSON without building a Scenario, so callers can
/// patch keys (see apply_override) before validation.
nlohmann::json read_scenario_json(const std::filesystem::path& path);

/// Sets the value at dotted `key` ("weights.w3", "goals.0.epsilon") to the
/// JSON-parsed `value` (falls back to a string when it is not valid JSON).
void apply_override(nlohmann::json& j, const std::string& key, const std::string& value);

}  // namespace stlcfs
