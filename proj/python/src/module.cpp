#include <pybind11/pybind11.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>

#include "isac/experiments.hpp"
#include "isac/fp_baseline.hpp"
#include "isac/linalg.hpp"
#include "isac/maxmin_smooth.hpp"
#include "isac/metrics.hpp"
#include "isac/scene.hpp"

namespace py = pybind11;
using namespace isac;

namespace {

py::dict trace_dict(const RunTrace& t) {
  std::vector<double> p1, p2, surrogate, ms;
  for (const auto& e : t.entries) {
    p1.push_back(e.objective_p1);
    p2.push_back(e.objective_p2);
    surrogate.push_back(e.surrogate);
    ms.push_back(e.elapsed_ms);
  }
  py::dict d;
  d["objective_p1"] = p1;
  d["objective_p2"] = p2;
  d["surrogate"] = surrogate;
  d["elapsed_ms"] = ms;
  d["converged"] = t.converged;
  d["degenerate"] = t.degenerate;
  d["best_iteration"] = t.best_iteration;
  return d;
}

py::tuple solve_result(const SolveResult& r) {
  return py::make_tuple(r.beamformers.w, r.beamformers.f, trace_dict(r.trace));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Max-min ISAC beamforming solvers.";

  // translators run newest first, so the base class goes first
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ArithmeticError);

  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init([]() { return default_config(); }))
      .def_readwrite("n_tx", &SystemConfig::n_tx)
      .def_readwrite("n_rx", &SystemConfig::n_rx)
      .def_readwrite("n_users", &SystemConfig::n_users)
      .def_readwrite("n_targets", &SystemConfig::n_targets)
      .def_readwrite("n_clutter", &SystemConfig::n_clutter)
      .def_readwrite("p_tx", &SystemConfig::p_tx)
      .def_readwrite("sigma2_c", &SystemConfig::sigma2_c)
      .def_readwrite("sigma2_s", &SystemConfig::sigma2_s)
      .def_readwrite("delta", &SystemConfig::delta)
      .def_readwrite("rician_db", &SystemConfig::rician_db)
      .def_readwrite("sensing_two_way", &SystemConfig::sensing_two_way)
      .def_readwrite("seed", &SystemConfig::seed)
      .def("validate", &SystemConfig::validate)
      .def("to_json", [](const SystemConfig& c) { return config_to_json(c).dump(); })
      .def_static("from_json", [](const std::string& text) {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
          throw InvalidArgument(e.what());
        }
        return config_from_json(j);
      });

  py::class_<Scene>(m, "Scene")
      .def_property_readonly("h", &Scene::h)
      .def_property_readonly("n_tx", &Scene::n_tx)
      .def_property_readonly("n_rx", &Scene::n_rx)
      .def_property_readonly("n_users", &Scene::n_users)
      .def_property_readonly("n_targets", &Scene::n_targets)
      .def_property_readonly("n_responses", &Scene::n_responses)
      .def_property_readonly("amplitudes", &Scene::amplitudes)
      .def_property_readonly("angles", [](const Scene& s) {
        std::vector<double> a;
        for (const auto& r : s.responses()) a.push_back(r.angle);
        return a;
      })
      .def("g", [](const Scene& s, int i) {
        if (i < 0 || i >= s.n_responses()) throw py::index_error();
        return s.g(i);
      });

  m.def("generate_scene", &generate_scene, py::arg("config"));
  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("index"));
  m.def("steering_vector", &steering_vector, py::arg("angle"), py::arg("n"));
  m.def("path_loss_amplitude", &path_loss_amplitude, py::arg("ref_db"),
        py::arg("distance"), py::arg("exponent"));

  m.def(
      "evaluate",
      [](const Scene& s, const CMatrix& w, const CMatrix& f, double delta) {
        const MetricsReport r = evaluate(s, {w, f}, delta);
        py::dict d;
        d["sinr"] = r.sinr;
        d["scnr"] = r.scnr;
        d["min_sinr"] = r.min_sinr;
        d["min_scnr"] = r.min_scnr;
        d["objective_p1"] = r.objective_p1;
        d["objective_p2"] = r.objective_p2;
        return d;
      },
      py::arg("scene"), py::arg("w"), py::arg("f"), py::arg("delta"));

  m.def(
      "solve",
      [](const Scene& s, const SystemConfig& cfg, double mu, int outer_max,
         int inner_w, double tol) {
        SolverOptions o;
        o.mu = mu;
        o.outer_max = outer_max;
        o.inner_w = inner_w;
        o.tol = tol;
        py::gil_scoped_release unlock;
        const SolveResult r = solve(s, cfg, o);
        py::gil_scoped_acquire lock;
        return solve_result(r);
      },
      py::arg("scene"), py::arg("config"), py::arg("mu") = 10.0,
      py::arg("outer_max") = 500, py::arg("inner_w") = 5, py::arg("tol") = 1e-5,
      "Smoothed max-min solver. Returns (W, F, trace).");

  m.def(
      "solve_fp",
      [](const Scene& s, const SystemConfig& cfg, int outer_max, double tol) {
        FpOptions o;
        o.outer_max = outer_max;
        o.tol = tol;
        py::gil_scoped_release unlock;
        const SolveResult r = solve_fp(s, cfg, o);
        py::gil_scoped_acquire lock;
        return solve_result(r);
      },
      py::arg("scene"), py::arg("config"), py::arg("outer_max") = 100,
      py::arg("tol") = 1e-5,
      "Fractional-programming baseline. Returns (W, F, trace).");

  m.def(
      "project_per_antenna",
      [](const CMatrix& s, double p_tx, const std::string& mode) {
        ProjectionMode pm;
        if (mode == "boundary") {
          pm = ProjectionMode::kBoundary;
        } else if (mode == "euclidean") {
          pm = ProjectionMode::kEuclidean;
        } else if (mode == "literal") {
          pm = ProjectionMode::kLiteralPrinted;
        } else {
          throw InvalidArgument("mode must be boundary|euclidean|literal");
        }
        return project_per_antenna(s, p_tx, pm);
      },
      py::arg("s"), py::arg("p_tx"), py::arg("mode") = "boundary");
  m.def("dominant_eigenvalue", &dominant_eigenvalue, py::arg("a"));
  m.def("hermitian_solve", &hermitian_solve, py::arg("a"), py::arg("b"));

  m.attr("__version__") = ISAC_VERSION;
}
