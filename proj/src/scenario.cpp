#include "stlcfs/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace stlcfs {

using nlohmann::json;

namespace {

std::string summarize(const std::vector<Violation>& violations) {
  std::ostringstream os;
  os << "invalid scenario:";
  for (const auto& v : violations) os << " [" << v.code << " at " << v.field << ": " << v.message << "]";
  return os.str();
}

const json& require(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw ScenarioParseError("missing required key '" + path + key + "'");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ScenarioParseError("'" + path + "' must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ScenarioParseError("'" + path + "' must be an integer");
  return j.get<int>();
}

Eigen::Vector3d as_vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ScenarioParseError("'" + path + "' must be an array of 3 numbers");
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) v[i] = as_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

template <typename T>
void optional_number(const json& obj, const char* key, const std::string& path, T& out) {
  if (!obj.contains(key)) return;
  if constexpr (std::is_integral_v<T>) {
    out = as_int(obj[key], path + key);
  } else {
    out = as_number(obj[key], path + key);
  }
}

json vec3_json(const Eigen::Vector3d& v) { return json::array({v[0], v[1], v[2]}); }

bool finite3(const Eigen::Vector3d& v) { return v.allFinite(); }

}  // namespace

ScenarioValidationError::ScenarioValidationError(std::vector<Violation> violations)
    : std::runtime_error(summarize(violations)), violations_(std::move(violations)) {}

std::vector<Violation> validate(const Scenario& s) {
  std::vector<Violation> out;
  auto add = [&](std::string code, std::string field, std::string msg) {
    out.push_back({std::move(code), std::move(field), std::move(msg)});
  };

  if (s.T < 2) add("horizon_too_short", "T", "T must be at least 2");
  if (!(s.dt > 0.0)) add("nonpositive_dt", "dt", "dt must be positive");
  if (!(s.v_max > 0.0)) add("nonpositive_v_max", "v_max", "v_max must be positive");
  if (!(s.a_max > 0.0)) add("nonpositive_a_max", "a_max", "a_max must be positive");
  if (!finite3(s.x_init)) add("non_finite_value", "x_init", "x_init must be finite");
  if (!finite3(s.v_init)) add("non_finite_value", "v_init", "v_init must be finite");

  for (std::size_t k = 0; k < s.goals.size(); ++k) {
    const Goal& g = s.goals[k];
    const std::string f = "goals[" + std::to_string(k) + "]";
    if (!(g.epsilon > 0.0)) add("nonpositive_epsilon", f + ".epsilon", "epsilon must be positive");
    if (!finite3(g.center)) add("non_finite_value", f + ".center", "center must be finite");
    if (g.tau_start > g.tau_end) {
      add("window_inverted", f + ".window", "tau_start must not exceed tau_end");
    }
    if (g.tau_start < 1 || g.tau_end > s.T || g.tau_end < 1 || g.tau_start > s.T) {
      add("window_out_of_range", f + ".window", "window must lie within [1, T]");
    }
  }

  for (std::size_t m = 0; m < s.obstacles.size(); ++m) {
    const BoxObstacle& o = s.obstacles[m];
    const std::string f = "obstacles[" + std::to_string(m) + "]";
    if (!finite3(o.lower) || !finite3(o.upper)) {
      add("non_finite_value", f, "bounds must be finite");
    } else if (!(o.lower.array() < o.upper.array()).all()) {
      add("degenerate_obstacle", f, "degenerate obstacle: lower must be strictly below upper on every axis");
    }
  }

  for (std::size_t k = 0; k < s.goals.size(); ++k) {
    for (std::size_t m = 0; m < s.obstacles.size(); ++m) {
      const auto& c = s.goals[k].center.array();
      const auto& o = s.obstacles[m];
      if ((c > o.lower.array()).all() && (c < o.upper.array()).all()) {
        add("goal_inside_obstacle", "goals[" + std::to_string(k) + "].center",
            "goal center lies strictly inside obstacles[" + std::to_string(m) + "]");
      }
    }
  }

  const Weights& w = s.weights;
  if (w.w1 < 0.0 || w.w2 < 0.0 || w.w3 < 0.0) add("negative_weight", "weights", "weights must be nonnegative");
  if (!(w.w1 > 0.0 || w.w2 > 0.0 || w.w3 > 0.0)) add("all_weights_zero", "weights", "at least one weight must be positive");
  if (!(w.d_safe >= 0.0)) add("negative_d_safe", "weights.d_safe", "d_safe must be nonnegative");

  const AlgorithmParams& p = s.params;
  if (!(p.alpha > 0.0)) add("nonpositive_alpha", "params.alpha", "alpha must be positive");
  if (p.max_outer_iters < 1) add("nonpositive_max_outer_iters", "params.max_outer_iters", "need at least one outer iteration");
  if (!(p.step_tol >= 0.0)) add("negative_step_tol", "params.step_tol", "step_tol must be nonnegative");
  if (!(p.cost_rel_tol >= 0.0)) add("negative_cost_rel_tol", "params.cost_rel_tol", "cost_rel_tol must be nonnegative");
  if (!(p.solver_tol > 0.0)) add("nonpositive_solver_tol", "params.solver_tol", "solver_tol must be positive");
  return out;
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ScenarioParseError("scenario must be a JSON object");
  Scenario s;
  s.T = as_int(require(j, "T", ""), "T");
  s.dt = as_number(require(j, "dt", ""), "dt");
  s.x_init = as_vec3(require(j, "x_init", ""), "x_init");
  if (j.contains("v_init")) s.v_init = as_vec3(j["v_init"], "v_init");
  s.v_max = as_number(require(j, "v_max", ""), "v_max");
  s.a_max = as_number(require(j, "a_max", ""), "a_max");

  const json& goals = require(j, "goals", "");
  if (!goals.is_array()) throw ScenarioParseError("'goals' must be an array");
  for (std::size_t k = 0; k < goals.size(); ++k) {
    const std::string p = "goals[" + std::to_string(k) + "].";
    const json& gj = goals[k];
    if (!gj.is_object()) throw ScenarioParseError("'" + p + "' must be an object");
    Goal g;
    g.center = as_vec3(require(gj, "center", p), p + "center");
    const json& w = require(gj, "window", p);
    if (!w.is_array() || w.size() != 2) throw ScenarioParseError("'" + p + "window' must be [start, end]");
    g.tau_start = as_int(w[0], p + "window[0]");
    g.tau_end = as_int(w[1], p + "window[1]");
    g.epsilon = as_number(require(gj, "epsilon", p), p + "epsilon");
    s.goals.push_back(g);
  }

  const json& obstacles = require(j, "obstacles", "");
  if (!obstacles.is_array()) throw ScenarioParseError("'obstacles' must be an array");
  for (std::size_t m = 0; m < obstacles.size(); ++m) {
    const std::string p = "obstacles[" + std::to_string(m) + "].";
    const json& oj = obstacles[m];
    if (!oj.is_object()) throw ScenarioParseError("'" + p + "' must be an object");
    s.obstacles.push_back({as_vec3(require(oj, "lower", p), p + "lower"), as_vec3(require(oj, "upper", p), p + "upper")});
  }

  if (j.contains("weights")) {
    const json& w = j["weights"];
    if (!w.is_object()) throw ScenarioParseError("'weights' must be an object");
    optional_number(w, "w1", "weights.", s.weights.w1);
    optional_number(w, "w2", "weights.", s.weights.w2);
    optional_number(w, "w3", "weights.", s.weights.w3);
    optional_number(w, "d_safe", "weights.", s.weights.d_safe);
  }
  if (j.contains("params")) {
    const json& p = j["params"];
    if (!p.is_object()) throw ScenarioParseError("'params' must be an object");
    optional_number(p, "alpha", "params.", s.params.alpha);
    optional_number(p, "max_outer_iters", "params.", s.params.max_outer_iters);
    optional_number(p, "step_tol", "params.", s.params.step_tol);
    optional_number(p, "cost_rel_tol", "params.", s.params.cost_rel_tol);
    optional_number(p, "solver_tol", "params.", s.params.solver_tol);
  }

  auto violations = validate(s);
  if (!violations.empty()) throw ScenarioValidationError(std::move(violations));
  return s;
}

json scenario_to_json(const Scenario& s) {
  json goals = json::array();
  for (const Goal& g : s.goals) {
    goals.push_back({{"center", vec3_json(g.center)}, {"window", {g.tau_start, g.tau_end}}, {"epsilon", g.epsilon}});
  }
  json obstacles = json::array();
  for (const BoxObstacle& o : s.obstacles) {
    obstacles.push_back({{"lower", vec3_json(o.lower)}, {"upper", vec3_json(o.upper)}});
  }
  return {
      {"T", s.T},
      {"dt", s.dt},
      {"x_init", vec3_json(s.x_init)},
      {"v_init", vec3_json(s.v_init)},
      {"v_max", s.v_max},
      {"a_max", s.a_max},
      {"goals", goals},
      {"obstacles", obstacles},
      {"weights", {{"w1", s.weights.w1}, {"w2", s.weights.w2}, {"w3", s.weights.w3}, {"d_safe", s.weights.d_safe}}},
      {"params",
       {{"alpha", s.params.alpha},
        {"max_outer_iters", s.params.max_outer_iters},
        {"step_tol", s.params.step_tol},
        {"cost_rel_tol", s.params.cost_rel_tol},
        {"solver_tol", s.params.solver_tol}}},
  };
}

json read_scenario_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("cannot open scenario file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioParseError("malformed scenario file '" + path.string() + "': " + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) { return scenario_from_json(read_scenario_json(path)); }

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file '" + path.string() + "'");
  out << scenario_to_json(s).dump(2) << '\n';
}

void apply_override(json& j, const std::string& key, const std::string& value) {
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;
  }
  json* node = &j;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (part.empty()) throw ScenarioParseError("bad override key '" + key + "'");
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(part);
      } catch (const std::exception&) {
        throw ScenarioParseError("override key '" + key + "': '" + part + "' is not an array index");
      }
      if (idx >= node->size()) throw ScenarioParseError("override key '" + key + "': index out of range");
      node = &(*node)[idx];
    } else {
      if (!node->is_object()) *node = json::object();
      node = &(*node)[part];
    }
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  *node = parsed;
}

}  // namespace stlcfs
