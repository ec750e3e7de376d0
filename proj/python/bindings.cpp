#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fcrk/bench.hpp"
#include "fcrk/errors.hpp"
#include "fcrk/cli.hpp"
#include "fcrk/orderconds.hpp"

#include <sstream>

namespace py = pybind11;
using namespace fcrk;

namespace {

Tableau method_or_file(const std::string& spec) {
  if (const auto id = parse_method_id(spec)) return builtin(*id);
  return load_tableau_file(spec);
}

Problem problem_or_throw(const std::string& id) {
  auto p = problem_by_id(id);
  if (!p) throw py::value_error("unknown problem '" + id + "'");
  return *p;
}

std::string label_of(const Tableau& t) {
  return std::visit([](const auto& x) { return x.name; }, t);
}

py::dict row_dict(const ConvergenceRow& r) {
  py::dict d;
  d["method"] = r.method;
  d["problem"] = r.problem;
  d["h"] = r.h;
  d["steps"] = r.steps;
  d["nf"] = r.nf;
  d["err"] = r.err;
  d["errp"] = r.errp;
  d["failure"] = r.failure;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Explicit FCRK / FCRKN integrators for retarded functional differential equations";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);

  m.def("methods", [] {
    std::vector<std::string> out;
    for (MethodId id : kAllMethods) out.emplace_back(method_name(id));
    return out;
  });

  m.def("tableau_text", [](const std::string& method) { return serialize_tableau(method_or_file(method)); },
        py::arg("method"));

  m.def(
      "check",
      [](const std::string& method, std::optional<int> order) {
        const Tableau t = method_or_file(method);
        const OrderReport rep = verify_order(t);
        const int claimed = order ? *order : std::visit([](const auto& x) { return x.claimed_order; }, t);
        py::dict d;
        d["uniform_u"] = rep.uniform_u;
        d["discrete_u"] = rep.discrete_u;
        d["uniform_du"] = rep.uniform_du;
        d["discrete_du"] = rep.discrete_du;
        d["claimed"] = claimed;
        d["certified"] = claimed > 0 && rep.certifies(claimed);
        d["report"] = rep.to_string();
        return d;
      },
      py::arg("method"), py::arg("order") = py::none());

  m.def(
      "solve",
      [](const std::string& method, const std::string& problem, double h, std::optional<double> t_end,
         bool reuse, std::vector<double> breakpoints, int samples) {
        const Tableau t = method_or_file(method);
        const Problem p = problem_or_throw(problem);
        IntegrationConfig cfg;
        cfg.h = h;
        cfg.t_end = t_end ? *t_end : std::visit([](const auto& q) { return q.t_final; }, p);
        cfg.reuse_enabled = reuse;
        cfg.breakpoints = std::move(breakpoints);
        IntegrationResult res = [&] {
          py::gil_scoped_release nogil;
          return integrate(p, t, cfg);
        }();
        std::vector<double> ts;
        std::vector<std::vector<double>> us, dus;
        const bool second = res.trace.kind() == SchemeKind::fcrkn;
        const auto& segs = res.trace.segments();
        for (std::size_t n = 0; n < segs.size(); ++n) {
          const int last = n + 1 == segs.size() ? samples : samples - 1;
          for (int j = 0; j <= last; ++j) {
            const double a = static_cast<double>(j) / samples;
            ts.push_back(j == samples ? segs[n].end : segs[n].sigma + a * segs[n].h);
            us.push_back(segs[n].value(a));
            if (second) dus.push_back(segs[n].derivative(a));
          }
        }
        py::dict d;
        d["t"] = ts;
        d["u"] = us;
        if (second) d["du"] = dus;
        d["steps"] = res.stats.steps;
        d["nf"] = res.stats.nf;
        d["restarts"] = res.stats.restarts;
        d["in_step_queries"] = res.stats.in_step_queries;
        return d;
      },
      py::arg("method"), py::arg("problem"), py::arg("h"), py::arg("t_end") = py::none(), py::arg("reuse") = true,
      py::arg("breakpoints") = std::vector<double>{}, py::arg("samples") = kDefaultSamplesPerStep);

  m.def(
      "converge",
      [](const std::string& method, const std::string& problem, std::vector<double> h_list, int samples,
         bool reuse) {
        const Tableau t = method_or_file(method);
        const Problem p = problem_or_throw(problem);
        RunOptions o;
        o.samples_per_step = samples;
        o.reuse = reuse;
        std::vector<ConvergenceRow> rows;
        {
          py::gil_scoped_release nogil;
          rows = run_convergence(p, t, label_of(t), h_list, o);
        }
        py::list out;
        for (const auto& r : rows) out.append(row_dict(r));
        return out;
      },
      py::arg("method"), py::arg("problem"), py::arg("h_list"), py::arg("samples") = kDefaultSamplesPerStep,
      py::arg("reuse") = true);

  m.def(
      "estimate_order",
      [](std::vector<double> h, std::vector<double> err) {
        const SlopeEstimate s = estimate_order(h, err);
        return py::make_tuple(s.slope, s.intercept, s.points_used);
      },
      py::arg("h"), py::arg("err"));

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        std::vector<const char*> argv{"fcrk"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
