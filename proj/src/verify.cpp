#include "stlcfs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stlcfs/geometry.hpp"
#include "stlcfs/stl.hpp"

namespace stlcfs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CheckResult make_check(std::string name, double margin, double tol) {
  CheckResult c;
  c.name = std::move(name);
  c.margin = margin;
  c.pass = margin >= -tol;
  return c;
}

// JSON has no infinity; the sentinel is spelled out.
nlohmann::json margin_json(double m) {
  if (std::isinf(m)) return m > 0 ? "inf" : "-inf";
  if (std::isnan(m)) return "nan";
  return m;
}

}  // namespace

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

VerificationReport verify(const Scenario& s, const Trajectory& traj, double tol) {
  VerificationReport r;
  r.tol = tol;
  const int T = traj.T();
  if (T != s.T || traj.velocities.rows() != T || traj.accelerations.rows() != T - 1) {
    CheckResult c = make_check("horizon", -kInf, tol);
    c.t = T;
    r.checks.push_back(c);
    r.pass = false;
    return r;
  }

  // Dynamics: worst Euler residual.
  {
    double worst = 0.0;
    int where = 0;
    for (int t = 1; t < T; ++t) {
      const double ex = (traj.x(t + 1) - traj.x(t) - traj.v(t) * s.dt).cwiseAbs().maxCoeff();
      const double ev = (traj.v(t + 1) - traj.v(t) - traj.a(t) * s.dt).cwiseAbs().maxCoeff();
      if (std::max(ex, ev) > worst || where == 0) {
        worst = std::max(ex, ev);
        where = t;
      }
    }
    CheckResult c = make_check("dynamics", -worst, tol);
    c.t = where;
    r.checks.push_back(c);
  }

  {
    const double err = std::max((traj.x(1) - s.x_init).cwiseAbs().maxCoeff(),
                                (traj.v(1) - s.v_init).cwiseAbs().maxCoeff());
    CheckResult c = make_check("initial_conditions", -err, tol);
    c.t = 1;
    r.checks.push_back(c);
  }

  {
    double margin = kInf;
    int where = 0;
    for (int t = 1; t <= T; ++t) {
      const double m = s.v_max - traj.v(t).head<2>().norm();
      if (m < margin) {
        margin = m;
        where = t;
      }
    }
    CheckResult c = make_check("planar_speed", margin, tol);
    c.t = where;
    r.checks.push_back(c);
  }

  {
    double margin = kInf;
    int where = 0;
    for (int t = 1; t < T; ++t) {
      const double m = s.a_max - traj.a(t).cwiseAbs().maxCoeff();
      if (m < margin) {
        margin = m;
        where = t;
      }
    }
    CheckResult c = make_check("acceleration", margin, tol);
    c.t = where;
    r.checks.push_back(c);
  }

  {
    double margin = kInf;
    int where_t = 0;
    int where_m = 0;
    const int M = static_cast<int>(s.obstacles.size());
    for (int m = 0; m < M; ++m) {
      for (int t = 1; t <= T; ++t) {
        const double d = signed_distance(traj.x(t), s.obstacles[m]);
        if (d < margin) {
          margin = d;
          where_t = t;
          where_m = m + 1;
        }
      }
      for (int t = 1; t < T; ++t) {
        const double clearance = std::min(signed_distance(traj.x(t), s.obstacles[m]),
                                          signed_distance(traj.x(t + 1), s.obstacles[m]));
        const double half = 0.5 * (traj.x(t + 1) - traj.x(t)).norm();
        if (clearance < half) r.inter_sample_risks.push_back({t, m + 1, clearance, half});
      }
    }
    CheckResult c = make_check("collision", margin, tol);
    c.t = where_t;
    c.obstacle = where_m;
    r.checks.push_back(c);
  }

  for (std::size_t k = 0; k < s.goals.size(); ++k) {
    const Goal& g = s.goals[k];
    double best = -kInf;
    int where = g.tau_start;
    for (int t = g.tau_start; t <= g.tau_end; ++t) {
      const double v = rho_exact(traj.x(t), g);
      if (v > best) {
        best = v;
        where = t;
      }
    }
    CheckResult c = make_check("stl_goal_" + std::to_string(k + 1), best, tol);
    c.t = where;
    c.goal = static_cast<int>(k) + 1;
    r.checks.push_back(c);
  }

  r.pass = std::all_of(r.checks.begin(), r.checks.end(), [](const CheckResult& c) { return c.pass; });
  return r;
}

std::vector<std::vector<double>> stl_margin_trace(const Scenario& s, const Trajectory& traj) {
  std::vector<std::vector<double>> out;
  out.reserve(s.goals.size());
  for (const Goal& g : s.goals) {
    std::vector<double> trace = rho_window(traj, g);
    for (std::size_t i = 1; i < trace.size(); ++i) trace[i] = std::max(trace[i], trace[i - 1]);
    out.push_back(std::move(trace));
  }
  return out;
}

nlohmann::json report_to_json(const VerificationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json j{{"name", c.name}, {"pass", c.pass}, {"margin", margin_json(c.margin)}};
    if (c.t > 0) j["t"] = c.t;
    if (c.goal > 0) j["goal"] = c.goal;
    if (c.obstacle > 0) j["obstacle"] = c.obstacle;
    checks.push_back(std::move(j));
  }
  nlohmann::json risks = nlohmann::json::array();
  for (const auto& r : report.inter_sample_risks) {
    risks.push_back({{"t", r.t}, {"obstacle", r.obstacle}, {"clearance", r.clearance}, {"half_length", r.half_length}});
  }
  return {{"pass", report.pass}, {"tol", report.tol}, {"checks", checks}, {"inter_sample_risks", risks}};
}

}  // namespace stlcfs
