#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "thinflow/cli.hpp"
#include "thinflow/config.hpp"
#include "thinflow/convergence.hpp"
#include "thinflow/csv.hpp"

namespace py = pybind11;
using namespace thinflow;

namespace {

RunConfig config_from(const std::string& text, py::object levels) {
  RunConfig cfg = parse_config(text);
  if (!levels.is_none()) {
    const Index n = levels.cast<Index>();
    cfg.nx = cfg.ny = cfg.nz = n;
  }
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_thinflow, m) {
  m.def("format_double", &format_double);

  // returns (status, stdout, stderr)
  m.def("run_command", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int status;
    {
      py::gil_scoped_release nogil;
      status = run_command(args, out, err);
    }
    return py::make_tuple(status, out.str(), err.str());
  });

  m.def("render_config", [](const std::string& text) { return render_config(parse_config(text)); });

  // sweep from config text; rows as dicts keyed by the sweep.csv columns
  m.def(
      "sweep",
      [](const std::string& text, py::object n) {
        const RunConfig cfg = config_from(text, n);
        ConvergenceReport rep;
        {
          py::gil_scoped_release nogil;
          rep = run_sweep(cfg);
        }
        py::list rows;
        for (const auto& r : rep.rows) {
          py::dict d;
          d["epsilon"] = r.epsilon;
          for (const auto& c : sweep_rate_columns()) d[py::str(c)] = sweep_column(r, c);
          d["energy_residual"] = r.energy_residual;
          d["error"] = r.error;
          rows.append(d);
        }
        py::dict rates;
        for (const auto& rr : rep.rates) rates[py::str(rr.quantity)] = py::make_tuple(rr.fit.rate, rr.fit.r2);
        return py::make_tuple(rows, rates);
      },
      py::arg("config_text"), py::arg("n") = py::none());

  auto base = py::register_exception<Error>(m, "ThinflowError");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
}
