#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "stlcfs/scenario.hpp"

using namespace stlcfs;
namespace fs = std::filesystem;

namespace {

const fs::path kUrbanScenario = fs::path(STLCFS_SCENARIO_DIR) / "paper_urban.json";

bool has_code(const std::vector<Violation>& v, const std::string& code) {
  for (const auto& x : v) {
    if (x.code == code) return true;
  }
  return false;
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("bundled urban scenario loads with its stated parameters") {
  const Scenario s = load_scenario(kUrbanScenario);
  CHECK(s.T == 30);
  CHECK(s.dt == 1.0);
  CHECK(s.x_init == Eigen::Vector3d(0, 0, 5));
  CHECK(s.v_init == Eigen::Vector3d::Zero());
  CHECK(s.v_max == 5.0);
  CHECK(s.a_max == 2.0);
  REQUIRE(s.goals.size() == 3);
  CHECK(s.goals[0].center == Eigen::Vector3d(17, 18, 5));
  CHECK(s.goals[0].tau_start == 4);
  CHECK(s.goals[0].tau_end == 15);
  CHECK(s.goals[1].center == Eigen::Vector3d(42, 28, 5));
  CHECK(s.goals[2].tau_end == 30);
  for (const auto& g : s.goals) CHECK(g.epsilon == 0.2);
  REQUIRE(s.obstacles.size() == 3);
  CHECK(s.obstacles[1].lower == Eigen::Vector3d(30, 20, 0));
  CHECK(s.obstacles[1].upper == Eigen::Vector3d(40, 30, 20));
  CHECK(validate(s).empty());
}

TEST_CASE("defaults apply when weights and params are omitted") {
  nlohmann::json j = read_scenario_json(kUrbanScenario);
  j.erase("weights");
  j.erase("params");
  j.erase("v_init");
  const Scenario s = scenario_from_json(j);
  CHECK(s.weights.w1 == 10.0);
  CHECK(s.weights.w2 == 0.1);
  CHECK(s.weights.w3 == 5.0);
  CHECK(s.weights.d_safe == 0.5);
  CHECK(s.params.alpha == 0.1);
  CHECK(s.params.max_outer_iters == 20);
  CHECK(s.params.step_tol == 1e-3);
  CHECK(s.params.cost_rel_tol == 1e-3);
  CHECK(s.params.solver_tol == 1e-6);
  CHECK(s.v_init == Eigen::Vector3d::Zero());
}

TEST_CASE("window ending at the horizon is accepted") {
  Scenario s = load_scenario(kUrbanScenario);
  s.goals[0].tau_end = s.T;
  CHECK(validate(s).empty());
  s.goals[0].tau_end = s.T + 1;
  CHECK(has_code(validate(s), "window_out_of_range"));
}

TEST_CASE("degenerate obstacle is rejected at load time") {
  nlohmann::json j = read_scenario_json(kUrbanScenario);
  j["obstacles"][0]["lower"] = {0, 0, 0};
  j["obstacles"][0]["upper"] = {0, 1, 1};
  try {
    scenario_from_json(j);
    FAIL("expected a validation error");
  } catch (const ScenarioValidationError& e) {
    CHECK(has_code(e.violations(), "degenerate_obstacle"));
    CHECK(std::string(e.what()).find("degenerate obstacle") != std::string::npos);
  }
}

TEST_CASE("goal at the center of an obstacle") {
  Scenario s = load_scenario(kUrbanScenario);
  s.goals = {Goal{{12.5, 10, 7.5}, 4, 15, 0.2}};
  const auto v = validate(s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].code == "goal_inside_obstacle");
}

TEST_CASE("goal on an obstacle face is not strictly inside") {
  Scenario s = load_scenario(kUrbanScenario);
  s.goals = {Goal{{10, 10, 5}, 4, 15, 0.2}};
  CHECK(validate(s).empty());
}

TEST_CASE("invariant violations carry their codes") {
  Scenario s = load_scenario(kUrbanScenario);
  s.v_max = 0.0;
  CHECK(validate(s).size() == 1);
  CHECK(validate(s)[0].code == "nonpositive_v_max");

  s = load_scenario(kUrbanScenario);
  s.T = 1;
  CHECK(has_code(validate(s), "horizon_too_short"));

  s = load_scenario(kUrbanScenario);
  s.goals[1].tau_start = 12;
  s.goals[1].tau_end = 11;
  CHECK(has_code(validate(s), "window_inverted"));

  s = load_scenario(kUrbanScenario);
  s.goals[2].epsilon = 0.0;
  CHECK(has_code(validate(s), "nonpositive_epsilon"));

  s = load_scenario(kUrbanScenario);
  s.weights = {0, 0, 0, 0.5};
  CHECK(has_code(validate(s), "all_weights_zero"));

  s = load_scenario(kUrbanScenario);
  s.weights.w2 = -1;
  CHECK(has_code(validate(s), "negative_weight"));

  s = load_scenario(kUrbanScenario);
  s.params.alpha = 0;
  s.params.max_outer_iters = 0;
  CHECK(has_code(validate(s), "nonpositive_alpha"));
  CHECK(has_code(validate(s), "nonpositive_max_outer_iters"));
}

TEST_CASE("malformed input raises parse errors") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ScenarioParseError);
  CHECK_THROWS_AS(load_scenario(write_temp("stlcfs_bad.json", "{\"T\": 30,")), ScenarioParseError);

  nlohmann::json j = read_scenario_json(kUrbanScenario);
  j.erase("v_max");
  CHECK_THROWS_AS(scenario_from_json(j), ScenarioParseError);

  j = read_scenario_json(kUrbanScenario);
  j["T"] = 30.5;
  CHECK_THROWS_AS(scenario_from_json(j), ScenarioParseError);

  j = read_scenario_json(kUrbanScenario);
  j["x_init"] = {0, 0};
  CHECK_THROWS_AS(scenario_from_json(j), ScenarioParseError);
}

TEST_CASE("save then load reproduces every numeric field bit-exactly") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::uniform_real_distribution<double> pos(1e-9, 1e3);
  for (int trial = 0; trial < 50; ++trial) {
    Scenario s;
    s.T = 2 + trial;
    s.dt = pos(rng);
    s.x_init = {u(rng), u(rng), u(rng)};
    s.v_init = {u(rng), u(rng), u(rng)};
    s.v_max = pos(rng);
    s.a_max = pos(rng);
    const Eigen::Vector3d lower(2000 + u(rng), 2000 + u(rng), u(rng));
    s.obstacles.push_back({lower, lower + Eigen::Vector3d(pos(rng), pos(rng), pos(rng))});
    s.goals.push_back({{u(rng), u(rng), u(rng)}, 1, s.T, pos(rng)});
    s.weights = {pos(rng), pos(rng), pos(rng), pos(rng)};
    s.params = {pos(rng), 1 + trial, pos(rng), pos(rng), pos(rng)};
    REQUIRE(validate(s).empty());

    const fs::path p = fs::temp_directory_path() / "stlcfs_roundtrip.json";
    save_scenario(s, p);
    const Scenario r = load_scenario(p);
    CHECK(r.T == s.T);
    CHECK(r.dt == s.dt);
    CHECK(r.x_init == s.x_init);
    CHECK(r.v_init == s.v_init);
    CHECK(r.v_max == s.v_max);
    CHECK(r.a_max == s.a_max);
    CHECK(r.goals[0].center == s.goals[0].center);
    CHECK(r.goals[0].epsilon == s.goals[0].epsilon);
    CHECK(r.obstacles[0].lower == s.obstacles[0].lower);
    CHECK(r.obstacles[0].upper == s.obstacles[0].upper);
    CHECK(r.weights.w1 == s.weights.w1);
    CHECK(r.weights.d_safe == s.weights.d_safe);
    CHECK(r.params.alpha == s.params.alpha);
    CHECK(r.params.solver_tol == s.params.solver_tol);
  }
}

TEST_CASE("dotted overrides patch the JSON before validation") {
  nlohmann::json j = read_scenario_json(kUrbanScenario);
  apply_override(j, "weights.w3", "0");
  apply_override(j, "goals.1.epsilon", "0.5");
  apply_override(j, "params.max_outer_iters", "7");
  const Scenario s = scenario_from_json(j);
  CHECK(s.weights.w3 == 0.0);
  CHECK(s.goals[1].epsilon == 0.5);
  CHECK(s.params.max_outer_iters == 7);
  CHECK_THROWS_AS(apply_override(j, "goals.9.epsilon", "1"), ScenarioParseError);
  CHECK_THROWS_AS(apply_override(j, "weights..w3", "1"), ScenarioParseError);
}
