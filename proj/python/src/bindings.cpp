#include <algorithm>
#include <limits>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "peakon/cli.hpp"
#include "peakon/core.hpp"
#include "peakon/dynamics.hpp"
#include "peakon/errors.hpp"
#include "peakon/experiments.hpp"
#include "peakon/functionals.hpp"
#include "peakon/spectral.hpp"

namespace py = pybind11;
using namespace peakon;

namespace {

std::vector<double> copy(std::span<const double> s) { return {s.begin(), s.end()}; }

py::dict trajectory_dict(const Trajectory& tr) {
  std::vector<double> t, energy, moment, sum_p;
  std::vector<std::vector<double>> q, p, lambda;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    t.push_back(tr.states[k].t);
    q.push_back(tr.states[k].q);
    p.push_back(tr.states[k].p);
    energy.push_back(tr.observables[k].energy);
    moment.push_back(tr.observables[k].moment_f);
    sum_p.push_back(tr.observables[k].sum_p);
    lambda.push_back(tr.observables[k].spectrum);
  }
  py::dict d;
  d["t"] = t;
  d["q"] = q;
  d["p"] = p;
  d["energy"] = energy;
  d["moment_f"] = moment;
  d["sum_p"] = sum_p;
  if (!lambda.empty() && !lambda.front().empty()) d["spectrum"] = lambda;
  d["accepted_steps"] = tr.stats.accepted;
  d["rejected_steps"] = tr.stats.rejected;
  return d;
}

py::dict stability_dict(const StabilityReport& r) {
  std::vector<double> t, d, gap;
  for (const auto& s : r.samples) {
    t.push_back(s.t);
    d.push_back(s.d);
    gap.push_back(s.gaps.empty() ? std::numeric_limits<double>::infinity()
                                 : *std::min_element(s.gaps.begin(), s.gaps.end()));
  }
  py::dict out;
  out["t"] = t;
  out["d"] = d;
  out["min_gap"] = gap;
  out["scale"] = r.scale;
  out["sup_d"] = r.summary.sup_d;
  out["min_localized_margin"] = r.summary.min_localized_margin;
  out["max_delta_diagnostic"] = r.summary.max_delta_diagnostic;
  out["ok"] = r.summary.ok();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Peakon trains for the Camassa-Holm equation";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<StateError>(m, "StateError", PyExc_ValueError);
  py::register_exception<ConstraintError>(m, "ConstraintError", PyExc_ValueError);
  py::register_exception<ConditioningError>(m, "ConditioningError", PyExc_ArithmeticError);
  py::register_exception<NearCollisionError>(m, "NearCollisionError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<cli::UsageError>(m, "UsageError", PyExc_ValueError);

  py::class_<PeakedField>(m, "PeakedField")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("amps"), py::arg("nodes"))
      .def_static("peakon", &PeakedField::peakon, py::arg("speed"), py::arg("position"))
      .def_property_readonly("amps", [](const PeakedField& u) { return copy(u.amps()); })
      .def_property_readonly("nodes", [](const PeakedField& u) { return copy(u.nodes()); })
      .def("__call__", [](const PeakedField& u, double x) { return u(x); })
      .def("__len__", &PeakedField::size)
      .def("__add__", &PeakedField::operator+)
      .def("__sub__", &PeakedField::operator-)
      .def("scaled", &PeakedField::scaled)
      .def("derivative", [](const PeakedField& u, double x) { return eval_dx(u, x); })
      .def("__repr__", [](const PeakedField& u) {
        return "PeakedField(size=" + std::to_string(u.size()) + ")";
      });

  m.def("energy", &energy, "int u^2 + u_x^2");
  m.def("moment_f", &moment_f, "int u^3 + u u_x^2");
  m.def("h1_inner", &h1_inner);
  m.def("h1_dist", &h1_dist);
  m.def("psi", &psi);

  py::class_<WeightProfile>(m, "WeightProfile")
      .def_static("constant", &WeightProfile::constant, py::arg("value") = 1.0)
      .def_static("psi", &WeightProfile::psi, py::arg("scale"), py::arg("center"))
      .def_static("one_minus_psi", &WeightProfile::one_minus_psi, py::arg("scale"), py::arg("center"))
      .def_static("psi_difference", &WeightProfile::psi_difference, py::arg("scale"), py::arg("left"),
                  py::arg("right"))
      .def("__call__", [](const WeightProfile& w, double x) { return w(x); });
  m.def("weighted_energy", &weighted_energy);
  m.def("weighted_f", &weighted_f);

  py::class_<PeakonState>(m, "PeakonState")
      .def(py::init([](std::vector<double> p, std::vector<double> q, double t) {
             PeakonState s{t, std::move(p), std::move(q)};
             s.validate();
             return s;
           }),
           py::arg("p"), py::arg("q"), py::arg("t") = 0.0)
      .def_readonly("t", &PeakonState::t)
      .def_readonly("p", &PeakonState::p)
      .def_readonly("q", &PeakonState::q)
      .def("field", &field)
      .def("hamiltonian", &hamiltonian)
      .def("mirrored", &PeakonState::mirrored);

  m.def(
      "rhs",
      [](const PeakonState& s) {
        const Derivative d = rhs(s);
        return py::make_tuple(d.dq, d.dp);
      },
      "Returns (dq/dt, dp/dt).");
  m.def(
      "integrate",
      [](const PeakonState& s0, double t_end, std::size_t samples, double tol, bool record_spectrum) {
        IntegratorOptions opt;
        opt.samples = samples;
        opt.tol = tol;
        opt.record_spectrum = record_spectrum;
        return trajectory_dict(integrate(s0, t_end, opt));
      },
      py::arg("state"), py::arg("t_end"), py::arg("samples") = 200, py::arg("tol") = kDefaultTol,
      py::arg("record_spectrum") = false);
  m.def("advance", &advance, py::arg("state"), py::arg("t_end"), py::arg("tol") = kDefaultTol);

  m.def(
      "spectrum", [](const PeakonState& s) { return spectrum(s).lambda; },
      "Eigenvalues of the peakon matrix, ascending.");

  m.def(
      "check_energy_identity",
      [](const PeakonState& s, const WeightProfile& g, double h) {
        const IdentityCheck c = check_energy_identity(s, g, h);
        py::dict d;
        d["lhs"] = c.lhs;
        d["rhs"] = c.rhs;
        d["residual"] = c.residual;
        return d;
      },
      py::arg("state"), py::arg("weight"), py::arg("h") = 1e-4);

  m.def(
      "run_stability",
      [](std::vector<double> speeds, double spacing, double epsilon, std::uint64_t seed, double t_end,
         std::size_t samples) {
        StabilityOptions opt;
        opt.t_end = t_end;
        opt.samples = samples;
        return stability_dict(run_stability(calibrated_train(std::move(speeds), spacing, epsilon, seed), opt));
      },
      py::arg("speeds"), py::arg("spacing"), py::arg("epsilon"), py::arg("seed"), py::arg("t_end") = 200.0,
      py::arg("samples") = 200);

  m.def(
      "run_asymptotics",
      [](const PeakonState& s0, double horizon) {
        const AsymptoticsReport r = run_asymptotics(s0, horizon);
        py::dict d;
        d["lambda"] = r.lambda;
        d["forward_p"] = r.forward.p;
        d["backward_p"] = r.backward.p;
        d["max_error"] = std::max({r.forward.max_p_error, r.forward.max_speed_error, r.backward.max_p_error,
                                   r.backward.max_speed_error});
        return d;
      },
      py::arg("state"), py::arg("horizon") = 80.0);

  m.def(
      "execute",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> argv = {"peakon_lab"};
        argv.insert(argv.end(), args.begin(), args.end());
        const cli::RunConfig config = cli::parse_config(argv);
        cli::validate(config);
        const cli::Outputs out = cli::execute(config);
        py::dict d;
        d["json"] = out.json.dump();
        d["csv"] = out.csv;
        d["svg"] = out.svg;
        d["checks_ok"] = out.checks_ok;
        return d;
      },
      py::arg("args"), "Run a command-line subcommand in memory; json is returned as text.");
}
