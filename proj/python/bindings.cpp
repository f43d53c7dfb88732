#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>

#include "stlcfs/io.hpp"
#include "stlcfs/planner.hpp"

namespace py = pybind11;
using namespace stlcfs;

namespace {

py::dict check_to_dict(const CheckResult& c) {
  py::dict d;
  d["name"] = c.name;
  d["pass"] = c.pass;
  d["margin"] = c.margin;
  d["t"] = c.t;
  d["goal"] = c.goal;
  d["obstacle"] = c.obstacle;
  return d;
}

py::dict report_to_dict(const VerificationReport& r) {
  py::list checks;
  for (const auto& c : r.checks) checks.append(check_to_dict(c));
  py::list risks;
  for (const auto& x : r.inter_sample_risks) {
    py::dict d;
    d["t"] = x.t;
    d["obstacle"] = x.obstacle;
    d["clearance"] = x.clearance;
    d["half_length"] = x.half_length;
    risks.append(d);
  }
  py::dict d;
  d["pass"] = r.pass;
  d["tol"] = r.tol;
  d["checks"] = checks;
  d["inter_sample_risks"] = risks;
  return d;
}

py::dict record_to_dict(const IterationRecord& r) {
  py::dict d;
  d["iter"] = r.iter;
  d["exact_obj"] = r.exact_obj;
  d["surrogate_obj"] = r.surrogate_obj;
  d["step_inf_norm"] = r.step_inf_norm;
  d["solver_status"] = to_string(r.solver_status);
  d["solve_time"] = r.solve_time;
  d["solver_iterations"] = r.solver_iterations;
  d["verified"] = r.verified;
  d["accepted"] = r.accepted;
  d["retried"] = r.retried;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sequential convex trajectory planner with reach-window goals";

  py::class_<Goal>(m, "Goal")
      .def(py::init<>())
      .def_readwrite("center", &Goal::center)
      .def_readwrite("tau_start", &Goal::tau_start)
      .def_readwrite("tau_end", &Goal::tau_end)
      .def_readwrite("epsilon", &Goal::epsilon);

  py::class_<BoxObstacle>(m, "BoxObstacle")
      .def(py::init<>())
      .def(py::init([](const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) { return BoxObstacle{lo, hi}; }),
           py::arg("lower"), py::arg("upper"))
      .def_readwrite("lower", &BoxObstacle::lower)
      .def_readwrite("upper", &BoxObstacle::upper);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("T", &Scenario::T)
      .def_readwrite("dt", &Scenario::dt)
      .def_readwrite("x_init", &Scenario::x_init)
      .def_readwrite("v_init", &Scenario::v_init)
      .def_readwrite("v_max", &Scenario::v_max)
      .def_readwrite("a_max", &Scenario::a_max)
      .def_readwrite("goals", &Scenario::goals)
      .def_readwrite("obstacles", &Scenario::obstacles)
      .def("to_json", [](const Scenario& s) { return scenario_to_json(s).dump(); })
      .def("validate", [](const Scenario& s) {
        py::list out;
        for (const auto& v : validate(s)) out.append(py::make_tuple(v.code, v.field, v.message));
        return out;
      });

  py::class_<Trajectory>(m, "Trajectory")
      .def(py::init<>())
      .def_readwrite("positions", &Trajectory::positions)
      .def_readwrite("velocities", &Trajectory::velocities)
      .def_readwrite("accelerations", &Trajectory::accelerations)
      .def_property_readonly("T", &Trajectory::T);

  py::class_<PlanResult>(m, "PlanResult")
      .def_property_readonly("status", [](const PlanResult& r) { return to_string(r.status); })
      .def_readonly("trajectory", &PlanResult::trajectory)
      .def_readonly("rho", &PlanResult::rho)
      .def_readonly("mu", &PlanResult::mu)
      .def_readonly("chosen_iteration", &PlanResult::chosen_iteration)
      .def_readonly("message", &PlanResult::message)
      .def_property_readonly("iterations",
                             [](const PlanResult& r) {
                               py::list out;
                               for (const auto& it : r.iterations) out.append(record_to_dict(it));
                               return out;
                             })
      .def_property_readonly("report", [](const PlanResult& r) { return report_to_dict(r.report); });

  m.def("load_scenario", [](const std::filesystem::path& p) { return load_scenario(p); }, py::arg("path"));
  m.def("scenario_from_json", [](const std::string& text) { return scenario_from_json(nlohmann::json::parse(text)); },
        py::arg("text"));
  m.def("propagate", &propagate, py::arg("x_init"), py::arg("v_init"), py::arg("accelerations"), py::arg("dt"));

  m.def(
      "plan",
      [](const Scenario& s, py::object on_iteration) {
        PlannerOptions opts;
        if (!on_iteration.is_none()) {
          opts.on_iteration = [on_iteration](const IterationRecord& r) {
            py::gil_scoped_acquire gil;
            on_iteration(record_to_dict(r));
          };
        }
        py::gil_scoped_release release;
        return plan(s, opts);
      },
      py::arg("scenario"), py::arg("on_iteration") = py::none());

  m.def(
      "verify", [](const Scenario& s, const Trajectory& t, double tol) { return report_to_dict(verify(s, t, tol)); },
      py::arg("scenario"), py::arg("trajectory"), py::arg("tol") = 1e-6);

  m.def("read_trajectory_csv", [](const std::filesystem::path& p) { return read_trajectory_csv_file(p); });
  m.def("write_trajectory_csv", [](const Trajectory& t, const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot open " + p.string());
    write_trajectory_csv(out, t);
  });

  m.def("signed_distance", &signed_distance, py::arg("point"), py::arg("box"));
  m.def("rho_exact", &rho_exact, py::arg("point"), py::arg("goal"));
  m.def("smooth_max", &smooth_max, py::arg("mu_prev"), py::arg("rho"), py::arg("alpha"));
  m.def(
      "smooth_max_coeffs",
      [](double mu, double rho, double alpha) {
        const SmoothMaxCoeffs c = smooth_max_coeffs(mu, rho, alpha);
        return py::make_tuple(c.c_mu, c.c_rho, c.c_0);
      },
      py::arg("mu_ref"), py::arg("rho_ref"), py::arg("alpha"));

  py::register_exception<ScenarioParseError>(m, "ScenarioParseError", PyExc_ValueError);
  py::register_exception<ScenarioValidationError>(m, "ScenarioValidationError", PyExc_ValueError);
  py::register_exception<CsvError>(m, "CsvError", PyExc_ValueError);
}
