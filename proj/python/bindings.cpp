#include <optional>
#include <string>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "erkn/experiment.hpp"
#include "erkn/integrator.hpp"
#include "erkn/phi.hpp"
#include "erkn/problems.hpp"
#include "erkn/stability.hpp"
#include "erkn/tableau.hpp"
#include "erkn/verification.hpp"

namespace py = pybind11;

namespace {

erkn::CoefficientKind parse_kind(const std::string& s) {
  if (s == "b") return erkn::CoefficientKind::kB;
  if (s == "b_bar") return erkn::CoefficientKind::kBbar;
  if (s == "a_bar") return erkn::CoefficientKind::kAbar;
  throw py::value_error("kind must be 'b', 'b_bar' or 'a_bar'");
}

std::optional<erkn::ExperimentKind> optional_kind(const std::optional<std::string>& s) {
  if (!s) return std::nullopt;
  return erkn::parse_experiment_kind(*s);
}

py::object config_dict(const erkn::ExperimentConfig& cfg) {
  return py::module_::import("json").attr("loads")(erkn::config_to_json(cfg));
}

py::dict trajectory_dict(const erkn::Trajectory& tr, std::size_t dim) {
  const auto n = static_cast<py::ssize_t>(tr.states.size());
  const auto d = static_cast<py::ssize_t>(dim);
  py::array_t<double> t(n), q({n, d}), p({n, d}), energy(n);
  auto tv = t.mutable_unchecked<1>();
  auto qv = q.mutable_unchecked<2>();
  auto pv = p.mutable_unchecked<2>();
  auto ev = energy.mutable_unchecked<1>();
  for (py::ssize_t k = 0; k < n; ++k) {
    const auto& s = tr.states[static_cast<std::size_t>(k)];
    tv(k) = s.t;
    ev(k) = tr.energy[static_cast<std::size_t>(k)];
    for (py::ssize_t i = 0; i < d; ++i) {
      qv(k, i) = s.q[static_cast<std::size_t>(i)];
      pv(k, i) = s.p[static_cast<std::size_t>(i)];
    }
  }
  py::dict out;
  out["t"] = t;
  out["q"] = q;
  out["p"] = p;
  out["energy"] = energy;
  out["steps"] = tr.steps;
  out["nfev"] = tr.nfev;
  out["geh"] = tr.geh;
  out["max_stage_iters"] = tr.max_stage_iters;
  out["guard_tripped"] = tr.guard_tripped;
  out["error"] = tr.error;
  return out;
}

}  // namespace

PYBIND11_MODULE(_erkn, m) {
  m.doc() = "Diagonal implicit symplectic ERKN integrators";

  py::register_exception<erkn::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<erkn::MethodTableau>(m, "Tableau")
      .def_readonly("name", &erkn::MethodTableau::name)
      .def_readonly("stages", &erkn::MethodTableau::stages)
      .def_readonly("order", &erkn::MethodTableau::order)
      .def_readonly("c", &erkn::MethodTableau::c)
      .def_readonly("d", &erkn::MethodTableau::d)
      .def_readonly("classical", &erkn::MethodTableau::classical)
      .def("b", [](const erkn::MethodTableau& t, int i, double v) {
        return erkn::coefficient(t, erkn::CoefficientKind::kB, i, 0, v);
      }, py::arg("i"), py::arg("v"))
      .def("b_bar", [](const erkn::MethodTableau& t, int i, double v) {
        return erkn::coefficient(t, erkn::CoefficientKind::kBbar, i, 0, v);
      }, py::arg("i"), py::arg("v"))
      .def("a_bar", [](const erkn::MethodTableau& t, int i, int j, double v) {
        return erkn::coefficient(t, erkn::CoefficientKind::kAbar, i, j, v);
      }, py::arg("i"), py::arg("j"), py::arg("v"))
      .def("__repr__", [](const erkn::MethodTableau& t) {
        return "<Tableau " + t.name + " stages=" + std::to_string(t.stages) +
               " order=" + std::to_string(t.order) + ">";
      });

  m.def("method_names", &erkn::method_names);
  m.def("serkn_method_names", &erkn::serkn_method_names);
  m.def("problem_names", &erkn::problem_names);
  m.def("make_method", [](const std::string& name) { return erkn::make_method(name); },
        py::arg("name"));
  m.def("rkn_limit", &erkn::rkn_limit, py::arg("method"));
  m.def("phi", [](int j, double v) { return erkn::phi(j, v); }, py::arg("j"), py::arg("v"));

  m.def("taylor_coefficients",
        [](const erkn::MethodTableau& t, const std::string& kind, int i, int j, int n) {
          return erkn::taylor_coefficients(erkn::coefficient_fn(t, parse_kind(kind), i, j), n);
        },
        py::arg("method"), py::arg("kind"), py::arg("i"), py::arg("j") = 0, py::arg("n") = 4);
  m.def("symplectic_residuals", &erkn::symplectic_residuals, py::arg("method"), py::arg("v"));

  m.def("integrate",
        [](const std::string& method, const std::string& problem,
           const std::map<std::string, double>& params, double h, double t_end, double stage_tol,
           int max_iters, int record_stride) {
          const auto prob = erkn::make_problem(problem, params);
          erkn::SolveSettings s;
          s.h = h;
          s.t_end = t_end;
          s.stage_tol = stage_tol;
          s.max_iters = max_iters;
          s.record_stride = record_stride;
          erkn::Trajectory tr;
          {
            py::gil_scoped_release release;
            tr = erkn::integrate(erkn::make_method(method), prob, prob.initial, s);
          }
          return trajectory_dict(tr, prob.dim);
        },
        py::arg("method"), py::arg("problem"), py::arg("params") = std::map<std::string, double>{},
        py::arg("h"), py::arg("t_end"), py::arg("stage_tol") = 1e-14, py::arg("max_iters") = 50,
        py::arg("record_stride") = 1);

  m.def("stability_matrix",
        [](const erkn::MethodTableau& t, double v, double z) { return erkn::stability_matrix(t, v, z); },
        py::arg("method"), py::arg("v"), py::arg("z"));
  m.def("classify_point",
        [](const erkn::MethodTableau& t, double v, double z) {
          double rho = 0.0;
          const int code = erkn::classify_point(t, v, z, &rho);
          return py::make_tuple(code, rho);
        },
        py::arg("method"), py::arg("v"), py::arg("z"));
  m.def("scan_region",
        [](const erkn::MethodTableau& t, double v_lo, double v_hi, double z_lo, double z_hi,
           int nv, int nz) {
          erkn::StabilityGrid g;
          {
            py::gil_scoped_release release;
            g = erkn::scan_region(t, v_lo, v_hi, z_lo, z_hi, nv, nz);
          }
          py::array_t<int> code({nv, nz});
          py::array_t<double> rho({nv, nz});
          auto cv = code.mutable_unchecked<2>();
          auto rv = rho.mutable_unchecked<2>();
          for (int i = 0; i < nv; ++i)
            for (int j = 0; j < nz; ++j) {
              const std::size_t idx = static_cast<std::size_t>(i) * nz + j;
              cv(i, j) = g.code[idx];
              rv(i, j) = g.rho[idx];
            }
          py::dict out;
          out["V"] = py::array_t<double>(static_cast<py::ssize_t>(nv), g.v_axis.data());
          out["z"] = py::array_t<double>(static_cast<py::ssize_t>(nz), g.z_axis.data());
          out["code"] = code;
          out["rho"] = rho;
          return out;
        },
        py::arg("method"), py::arg("v_lo") = 0.125, py::arg("v_hi") = 50.0,
        py::arg("z_lo") = -50.0, py::arg("z_hi") = 50.0, py::arg("nv") = 400,
        py::arg("nz") = 400);

  m.def("parse_config",
        [](const std::string& text, std::optional<std::string> kind) {
          return config_dict(erkn::parse_config(text, optional_kind(kind)));
        },
        py::arg("text"), py::arg("kind") = py::none());
  m.def("load_config",
        [](const std::filesystem::path& path, std::optional<std::string> kind) {
          return config_dict(erkn::load_config(path, optional_kind(kind)));
        },
        py::arg("path"), py::arg("kind") = py::none());
  m.def("run_experiment",
        [](const std::filesystem::path& config, std::optional<std::string> kind,
           std::optional<std::filesystem::path> out_dir, bool timing) {
          auto cfg = erkn::load_config(config, optional_kind(kind));
          if (out_dir) cfg.out_dir = *out_dir;
          if (!timing) cfg.timing = false;
          erkn::RunResult r;
          {
            py::gil_scoped_release release;
            r = erkn::run_experiment(cfg);
          }
          py::dict out;
          out["files"] = r.files;
          out["verify_failed"] = r.verify_failed;
          return out;
        },
        py::arg("config"), py::arg("kind") = py::none(), py::arg("out_dir") = py::none(),
        py::arg("timing") = true);
}
