#include <algorithm>
#include <cmath>
#include <limits>

#include "peakon/cli.hpp"
#include "peakon/errors.hpp"
#include "peakon/spectral.hpp"

namespace peakon::cli {

namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

// JSON has no infinities; they are written as null.
ojson num(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

double num_from(const json& j) {
  return j.is_null() ? kInf : j.get<double>();
}

template <class F>
ojson column(const std::vector<StabilitySample>& s, F f) {
  ojson a = ojson::array();
  for (const auto& x : s) a.push_back(f(x));
  return a;
}

std::string label(const std::string& base, std::size_t i) { return base + "_" + std::to_string(i); }

double envelope_shape(double eps, double spacing) {
  return std::sqrt(eps) + std::pow(spacing, -0.125);
}

std::vector<std::string> numbers(const std::vector<double>& v) {
  std::vector<std::string> out;
  for (double x : v) out.push_back(format_number(x));
  return out;
}

void append(std::vector<std::string>& row, const std::vector<double>& v) {
  for (double x : v) row.push_back(format_number(x));
}

// -------------------------------------------------------------------------

Outputs simulate(const RunConfig& c) {
  PeakonState s0{0.0, c.p, c.q};
  IntegratorOptions io;
  io.tol = c.tol;
  io.samples = c.samples;
  io.record_spectrum = c.record_spectrum;
  const Trajectory tr = integrate(s0, c.t_end, io);
  const std::size_t n = s0.size();

  Outputs out;
  std::vector<std::string> header{"t"};
  for (std::size_t i = 1; i <= n; ++i) header.push_back(label("q", i));
  for (std::size_t i = 1; i <= n; ++i) header.push_back(label("p", i));
  header.insert(header.end(), {"E", "F", "sum_p"});
  if (c.record_spectrum) {
    for (std::size_t i = 1; i <= n; ++i) header.push_back(label("lambda", i));
  }
  std::vector<std::vector<std::string>> rows;
  ojson t = ojson::array(), q = ojson::array(), p = ojson::array(), e = ojson::array(),
        f = ojson::array(), sp = ojson::array(), lam = ojson::array();
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const PeakonState& s = tr.states[k];
    const Observables& o = tr.observables[k];
    std::vector<std::string> row{format_number(s.t)};
    append(row, s.q);
    append(row, s.p);
    append(row, {o.energy, o.moment_f, o.sum_p});
    if (c.record_spectrum) append(row, o.spectrum);
    rows.push_back(std::move(row));
    t.push_back(s.t);
    q.push_back(s.q);
    p.push_back(s.p);
    e.push_back(o.energy);
    f.push_back(o.moment_f);
    sp.push_back(o.sum_p);
    if (c.record_spectrum) lam.push_back(o.spectrum);
  }
  out.csv = to_csv(header, rows);

  auto drift = [&](auto get) {
    const double ref = get(tr.observables.front());
    double m = 0.0;
    for (const auto& o : tr.observables) m = std::max(m, std::fabs(get(o) / ref - 1.0));
    return m;
  };
  ojson summary;
  summary["drift_E"] = drift([](const Observables& o) { return o.energy; });
  summary["drift_F"] = drift([](const Observables& o) { return o.moment_f; });
  summary["drift_sum_p"] = drift([](const Observables& o) { return o.sum_p; });
  if (c.record_spectrum) {
    double m = 0.0;
    for (const auto& o : tr.observables) {
      for (std::size_t i = 0; i < n; ++i) {
        m = std::max(m, std::fabs(o.spectrum[i] / tr.observables.front().spectrum[i] - 1.0));
      }
    }
    summary["drift_lambda"] = m;
  }
  summary["accepted_steps"] = tr.stats.accepted;
  summary["rejected_steps"] = tr.stats.rejected;

  out.json["command"] = "simulate";
  out.json["spec"] = {{"p", c.p}, {"q", c.q}, {"t_end", c.t_end}, {"tol", c.tol}, {"samples", c.samples}};
  ojson series;
  series["t"] = t;
  series["q"] = q;
  series["p"] = p;
  series["E"] = e;
  series["F"] = f;
  series["sum_p"] = sp;
  if (c.record_spectrum) series["lambda"] = lam;
  out.json["series"] = series;
  out.json["summary"] = summary;

  std::vector<PlotSeries> plot;
  for (std::size_t i = 0; i < n; ++i) {
    PlotSeries ps{label("q", i + 1), {}, {}, false};
    for (const auto& s : tr.states) {
      ps.x.push_back(s.t);
      ps.y.push_back(s.q[i]);
    }
    plot.push_back(std::move(ps));
  }
  out.svg = svg_plot("Peakon positions", "t", "q_i(t)", plot);
  return out;
}

Outputs spectrum_command(const RunConfig& c) {
  const PeakonState s{0.0, c.p, c.q};
  const Spectrum sp = spectrum(s);
  Outputs out;
  std::vector<std::vector<std::string>> rows;
  ojson res = ojson::array();
  for (std::size_t k = 0; k < sp.lambda.size(); ++k) {
    std::vector<double> v(s.size());
    for (std::size_t r = 0; r < s.size(); ++r) v[r] = sp.vectors(r, k);
    const double residual = eigen_residual(s, sp.lambda[k], v);
    rows.push_back({std::to_string(k + 1), format_number(sp.lambda[k]), format_number(residual)});
    res.push_back(residual);
  }
  out.csv = to_csv({"i", "lambda", "residual"}, rows);
  out.json["command"] = "spectrum";
  out.json["spec"] = {{"p", c.p}, {"q", c.q}};
  out.json["lambda"] = sp.lambda;
  out.json["residual"] = res;
  for (std::size_t k = 0; k < sp.lambda.size(); ++k) {
    if (!(sp.lambda[k] > 0.0) || (k > 0 && !(sp.lambda[k] > sp.lambda[k - 1]))) {
      out.checks_ok = false;
      out.failed_checks.push_back("spectrum is not positive and simple");
      break;
    }
  }
  PlotSeries ps{"lambda", {}, {}, false};
  for (std::size_t k = 0; k < sp.lambda.size(); ++k) {
    ps.x.push_back(static_cast<double>(k + 1));
    ps.y.push_back(sp.lambda[k]);
  }
  out.svg = svg_plot("Spectrum of A_N", "i", "lambda_i", {ps});
  return out;
}

std::vector<TrainSpec> train_specs(const RunConfig& c) {
  std::vector<TrainSpec> specs;
  for (double eps : c.epsilon) {
    specs.push_back(calibrated_train(c.speeds, c.spacing, eps, c.seed.value_or(0), c.micro));
  }
  return specs;
}

Outputs stability(const RunConfig& c) {
  StabilityOptions opt;
  opt.t_end = c.t_end;
  opt.scale = c.scale.value_or(0.0);
  opt.samples = c.samples;
  opt.tol = c.tol;
  const SweepReport sw = run_stability_sweep(train_specs(c), opt, c.jobs);

  double a_fit = 0.0;
  for (const auto& r : sw.runs) {
    a_fit = std::max(a_fit, r.summary.sup_d / envelope_shape(r.spec.epsilon, r.spec.spacing));
  }

  Outputs out;
  const std::size_t n = c.speeds.size();
  std::vector<std::string> header{"eps", "t", "d", "tracked_distance"};
  for (std::size_t i = 1; i <= n; ++i) header.push_back(label("x", i));
  for (std::size_t i = 1; i <= n; ++i) header.push_back(label("x_mod", i));
  for (std::size_t i = 2; i <= n; ++i) header.push_back(label("gap", i));
  for (std::size_t i = 1; i <= n; ++i) header.push_back(label("delta", i));
  for (std::size_t i = 2; i <= n; ++i) header.push_back(label("I", i));
  for (std::size_t i = 1; i <= n; ++i) header.push_back(label("localized_margin", i));
  header.push_back("delta_diagnostic");
  std::vector<std::vector<std::string>> rows;
  std::vector<PlotSeries> plot;
  ojson runs = ojson::array();
  for (std::size_t k = 0; k < sw.runs.size(); ++k) {
    const StabilityReport& r = sw.runs[k];
    PlotSeries d{"d, eps=" + format_number(r.spec.epsilon), {}, {}, false};
    for (const StabilitySample& s : r.samples) {
      std::vector<std::string> row{format_number(r.spec.epsilon), format_number(s.t), format_number(s.d),
                                   format_number(s.tracked_distance)};
      append(row, s.peaks);
      append(row, s.modulated);
      append(row, s.gaps);
      append(row, s.delta);
      append(row, s.weighted);
      append(row, s.localized_margin);
      row.push_back(format_number(s.delta_diagnostic));
      rows.push_back(std::move(row));
      d.x.push_back(s.t);
      d.y.push_back(s.d);
    }
    const double env = a_fit * envelope_shape(r.spec.epsilon, r.spec.spacing);
    plot.push_back(std::move(d));
    plot.push_back({"envelope, eps=" + format_number(r.spec.epsilon), {0.0, c.t_end}, {env, env}, true});
    runs.push_back(to_json(r, opt, a_fit, sw.sweep_constant));

    const std::string tag = "eps=" + format_number(r.spec.epsilon) + ": ";
    if (!r.summary.gap_ok) out.failed_checks.push_back(tag + "gap condition x_j - x_{j-1} > L/2 violated");
    if (!r.summary.localized_ok) out.failed_checks.push_back(tag + "localized inequality margin negative");
    if (!r.summary.offset_ok) out.failed_checks.push_back(tag + "|x - x~| exceeds L/12");
    if (!r.summary.tracked_ok) out.failed_checks.push_back(tag + "tracked distance exceeds 10 d + N exp(-L/8)");
  }
  out.csv = to_csv(header, rows);
  if (sw.runs.size() == 1) {
    out.json = runs[0];
  } else {
    out.json["command"] = "stability";
    ojson sweep;
    sweep["eps"] = c.epsilon;
    sweep["ratio"] = sw.ratio;
    sweep["sweep_constant"] = sw.sweep_constant;
    sweep["spread"] = num(sw.spread);
    sweep["a_fit"] = a_fit;
    sweep["diagnostic_decreasing"] = sw.diagnostic_decreasing;
    out.json["sweep"] = sweep;
    out.json["runs"] = runs;
    if (!(sw.spread <= 4.0)) out.failed_checks.push_back("sup d / sqrt(eps) spread exceeds 4");
    if (!sw.diagnostic_decreasing) out.failed_checks.push_back("delta diagnostic does not decrease with eps");
  }
  out.checks_ok = out.failed_checks.empty();
  out.svg = svg_plot("Shift distance d(t)", "t", "d(t)", plot);
  return out;
}

Outputs monotonicity(const RunConfig& c) {
  const double k = c.scale.value_or(default_scale(c.spacing));
  const TrainSpec spec = calibrated_train(c.speeds, c.spacing, c.epsilon.front(), c.seed.value_or(0), c.micro);
  const MonotonicityReport r = run_monotonicity(spec, k, c.t_end, c.samples, c.tol);
  Outputs out;
  const std::size_t n = c.speeds.size();
  std::vector<std::string> header{"t"};
  for (std::size_t j = 2; j <= n; ++j) header.push_back(label("I", j));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t s = 0; s < r.t.size(); ++s) {
    std::vector<std::string> row{format_number(r.t[s])};
    append(row, r.weighted[s]);
    rows.push_back(std::move(row));
  }
  out.csv = to_csv(header, rows);
  ojson spec_json = to_json(spec);
  spec_json["K"] = k;
  spec_json["t_end"] = c.t_end;
  spec_json["samples"] = c.samples;
  spec_json["tol"] = c.tol;
  out.json["command"] = "monotonicity";
  out.json["spec"] = spec_json;
  out.json["series"] = {{"t", r.t}, {"I", r.weighted}};
  out.json["summary"] = {{"max_increase", r.max_increase},
                         {"envelope", r.envelope},
                         {"constant", r.constant},
                         {"bound", 100.0 * r.envelope},
                         {"ok", r.ok}};
  if (!r.ok) out.failed_checks.push_back("max increase exceeds 100 exp(-sigma0 L / 8K)");
  out.checks_ok = r.ok;
  std::vector<PlotSeries> plot;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    PlotSeries ps{label("I", j + 2), r.t, {}, false};
    for (const auto& row : r.weighted) ps.y.push_back(row[j] - r.weighted.front()[j]);
    plot.push_back(std::move(ps));
  }
  plot.push_back({"100 envelope", {0.0, c.t_end}, {100.0 * r.envelope, 100.0 * r.envelope}, true});
  out.svg = svg_plot("I_{j,K}(t) - I_{j,K}(0)", "t", "increase", plot);
  return out;
}

ojson side_json(const AsymptoticSide& s) {
  return {{"t", s.t},
          {"target", s.target},
          {"p", s.p},
          {"speed", s.speed},
          {"max_p_error", s.max_p_error},
          {"max_speed_error", s.max_speed_error},
          {"distance", s.distance}};
}

Outputs asymptotics(const RunConfig& c) {
  const AsymptoticsReport r = run_asymptotics(PeakonState{0.0, c.p, c.q}, c.t_end, c.tol);
  Outputs out;
  std::vector<std::vector<std::string>> rows;
  for (const AsymptoticSide* s : {&r.backward, &r.forward}) {
    for (std::size_t i = 0; i < s->p.size(); ++i) {
      rows.push_back({format_number(s->t), std::to_string(i + 1), format_number(s->target[i]),
                      format_number(s->p[i]), format_number(s->speed[i])});
    }
  }
  out.csv = to_csv({"t", "i", "target", "p", "speed"}, rows);
  out.json["command"] = "asymptotics";
  out.json["spec"] = {{"p", c.p}, {"q", c.q}, {"T", c.t_end}, {"tol", c.tol}};
  out.json["lambda"] = r.lambda;
  out.json["forward"] = side_json(r.forward);
  out.json["backward"] = side_json(r.backward);
  std::vector<PlotSeries> plot;
  for (std::size_t i = 0; i < r.lambda.size(); ++i) {
    plot.push_back({label("p", i + 1), {r.backward.t, 0.0, r.forward.t},
                    {r.backward.p[i], c.p[i], r.forward.p[i]}, false});
  }
  out.svg = svg_plot("Momenta at -T, 0, T", "t", "p_i", plot);
  return out;
}

Outputs identity_check(const RunConfig& c) {
  const PeakonState s{0.0, c.p, c.q};
  const double k = c.scale.value_or(4.0);
  const WeightProfile g = WeightProfile::psi(k, c.center);
  const IdentityCheck a = check_energy_identity(s, g, c.h);
  const IdentityCheck b = check_energy_identity(s, g, 0.5 * c.h);
  const double ratio = a.residual / b.residual;
  Outputs out;
  std::vector<std::vector<std::string>> rows;
  for (const auto& [h, r] : {std::pair{c.h, a}, std::pair{0.5 * c.h, b}}) {
    rows.push_back({format_number(h), format_number(r.lhs), format_number(r.rhs), format_number(r.residual),
                    format_number(r.printed_rhs), format_number(r.printed_residual)});
  }
  out.csv = to_csv({"h", "lhs", "rhs", "residual", "printed_rhs", "printed_residual"}, rows);
  out.json["command"] = "identity-check";
  out.json["spec"] = {{"p", c.p}, {"q", c.q}, {"K", k}, {"center", c.center}, {"h", c.h}};
  auto one = [](const IdentityCheck& r) {
    return ojson{{"lhs", r.lhs}, {"rhs", r.rhs}, {"residual", r.residual},
                 {"printed_rhs", r.printed_rhs}, {"printed_residual", r.printed_residual}};
  };
  out.json["h"] = one(a);
  out.json["half_h"] = one(b);
  out.json["richardson_ratio"] = num(ratio);
  if (!(a.residual <= 1e-5)) out.failed_checks.push_back("identity residual exceeds 1e-5");
  out.checks_ok = out.failed_checks.empty();
  out.svg = svg_plot("Identity residual", "h", "residual",
                     {{"residual", {0.5 * c.h, c.h}, {b.residual, a.residual}, false}});
  return out;
}

Outputs approximate(const RunConfig& c) {
  DensitySpec density = c.grid ? DensitySpec{*c.grid} : DensitySpec{c.mixture};
  const DensityApproximation r = approximate_from_density(density, c.count);
  Outputs out;
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < r.state.size(); ++i) {
    rows.push_back({std::to_string(i + 1), format_number(r.state.p[i]), format_number(r.state.q[i])});
  }
  out.csv = to_csv({"i", "p", "q"}, rows);
  out.json["command"] = "approximate";
  out.json["spec"] = {{"N", c.count}};
  out.json["state"] = {{"p", r.state.p}, {"q", r.state.q}};
  out.json["mass"] = r.mass;
  out.json["distance"] = r.distance;
  // Field and target on a window around the support.
  const double lo = r.state.q.front() - 5.0;
  const double hi = r.state.q.back() + 5.0;
  PlotSeries uf{"peakon field", {}, {}, false};
  PlotSeries ut{"target", {}, {}, true};
  const PeakedField u = field(r.state);
  for (int k = 0; k <= 400; ++k) {
    const double x = lo + (hi - lo) * k / 400.0;
    uf.x.push_back(x);
    uf.y.push_back(eval(u, x));
    ut.x.push_back(x);
    ut.y.push_back(r.target(x));
  }
  out.svg = svg_plot("Peakon approximation", "x", "u", {uf, ut});
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

ojson to_json(const TrainSpec& spec) {
  ojson micro = ojson::array();
  for (const MicroPeakon& m : spec.perturbation.micro) micro.push_back({{"amp", m.amp}, {"position", m.position}});
  return {{"speeds", spec.speeds},
          {"shifts", spec.shifts},
          {"L", spec.spacing},
          {"eps", spec.epsilon},
          {"seed", spec.seed},
          {"perturbation",
           {{"amp_jitter", spec.perturbation.amp_jitter},
            {"node_jitter", spec.perturbation.node_jitter},
            {"micro", micro},
            {"scale", spec.perturbation.scale}}}};
}

TrainSpec train_spec_from_json(const json& j) {
  TrainSpec s;
  s.speeds = j.at("speeds").get<std::vector<double>>();
  s.shifts = j.at("shifts").get<std::vector<double>>();
  s.spacing = j.at("L").get<double>();
  s.epsilon = j.at("eps").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  const json& p = j.at("perturbation");
  s.perturbation.amp_jitter = p.at("amp_jitter").get<std::vector<double>>();
  s.perturbation.node_jitter = p.at("node_jitter").get<std::vector<double>>();
  for (const json& m : p.at("micro")) s.perturbation.micro.push_back({m.at("amp").get<double>(), m.at("position").get<double>()});
  s.perturbation.scale = p.at("scale").get<double>();
  return s;
}

ojson to_json(const StabilityReport& r, const StabilityOptions& options, double a_fit,
              double sweep_constant) {
  ojson spec = to_json(r.spec);
  spec["K"] = r.scale;
  spec["t_end"] = options.t_end;
  spec["samples"] = options.samples;
  spec["tol"] = options.tol;

  ojson series;
  const auto& s = r.samples;
  series["t"] = column(s, [](const auto& x) { return x.t; });
  series["d"] = column(s, [](const auto& x) { return x.d; });
  series["gaps"] = column(s, [](const auto& x) { return x.gaps; });
  series["delta"] = column(s, [](const auto& x) { return x.delta; });
  series["I"] = column(s, [](const auto& x) { return x.weighted; });
  series["x"] = column(s, [](const auto& x) { return x.peaks; });
  series["x_mod"] = column(s, [](const auto& x) { return x.modulated; });
  series["modulation_converged"] = column(s, [](const auto& x) { return x.modulation_converged; });
  series["shifts"] = column(s, [](const auto& x) { return x.shifts; });
  series["tracked_distance"] = column(s, [](const auto& x) { return x.tracked_distance; });
  series["localized_margin"] = column(s, [](const auto& x) { return x.localized_margin; });
  series["delta_diagnostic"] = column(s, [](const auto& x) { return x.delta_diagnostic; });

  const StabilitySummary& m = r.summary;
  ojson summary;
  summary["sup_d"] = m.sup_d;
  summary["min_gap"] = num(m.min_gap);
  summary["sweep_constant"] = sweep_constant;
  summary["envelope"] = a_fit * envelope_shape(r.spec.epsilon, r.spec.spacing);
  summary["max_delta_diagnostic"] = m.max_delta_diagnostic;
  summary["min_localized_margin"] = num(m.min_localized_margin);
  summary["max_peak_offset"] = m.max_peak_offset;
  summary["max_tracked_excess"] = num(m.max_tracked_excess);
  summary["gap_ok"] = m.gap_ok;
  summary["localized_ok"] = m.localized_ok;
  summary["offset_ok"] = m.offset_ok;
  summary["tracked_ok"] = m.tracked_ok;

  return {{"command", "stability"}, {"spec", spec}, {"series", series}, {"summary", summary}};
}

StabilityReport stability_from_json(const json& j) {
  StabilityReport r;
  r.spec = train_spec_from_json(j.at("spec"));
  r.scale = j.at("spec").at("K").get<double>();
  const json& s = j.at("series");
  const std::size_t n = s.at("t").size();
  for (std::size_t k = 0; k < n; ++k) {
    StabilitySample x;
    x.t = s["t"][k].get<double>();
    x.d = s["d"][k].get<double>();
    x.gaps = s["gaps"][k].get<std::vector<double>>();
    x.delta = s["delta"][k].get<std::vector<double>>();
    x.weighted = s["I"][k].get<std::vector<double>>();
    x.peaks = s["x"][k].get<std::vector<double>>();
    x.modulated = s["x_mod"][k].get<std::vector<double>>();
    x.modulation_converged = s["modulation_converged"][k].get<bool>();
    x.shifts = s["shifts"][k].get<std::vector<double>>();
    x.tracked_distance = s["tracked_distance"][k].get<double>();
    x.localized_margin = s["localized_margin"][k].get<std::vector<double>>();
    x.delta_diagnostic = s["delta_diagnostic"][k].get<double>();
    r.samples.push_back(std::move(x));
  }
  const json& m = j.at("summary");
  r.summary.sup_d = m.at("sup_d").get<double>();
  r.summary.min_gap = num_from(m.at("min_gap"));
  r.summary.max_delta_diagnostic = m.at("max_delta_diagnostic").get<double>();
  r.summary.min_localized_margin = num_from(m.at("min_localized_margin"));
  r.summary.max_peak_offset = m.at("max_peak_offset").get<double>();
  const json& ex = m.at("max_tracked_excess");
  r.summary.max_tracked_excess = ex.is_null() ? -kInf : ex.get<double>();
  r.summary.gap_ok = m.at("gap_ok").get<bool>();
  r.summary.localized_ok = m.at("localized_ok").get<bool>();
  r.summary.offset_ok = m.at("offset_ok").get<bool>();
  r.summary.tracked_ok = m.at("tracked_ok").get<bool>();
  return r;
}

bool same_fields(const StabilityReport& a, const StabilityReport& b) {
  if (!(a.spec == b.spec) || a.scale != b.scale || a.samples.size() != b.samples.size()) return false;
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    const StabilitySample& x = a.samples[k];
    const StabilitySample& y = b.samples[k];
    if (x.t != y.t || x.d != y.d || x.tracked_distance != y.tracked_distance || x.peaks != y.peaks ||
        x.modulated != y.modulated || x.modulation_converged != y.modulation_converged ||
        x.shifts != y.shifts || x.gaps != y.gaps || x.delta != y.delta || x.weighted != y.weighted ||
        x.localized_margin != y.localized_margin || x.delta_diagnostic != y.delta_diagnostic) {
      return false;
    }
  }
  const StabilitySummary& p = a.summary;
  const StabilitySummary& q = b.summary;
  return p.sup_d == q.sup_d && p.min_gap == q.min_gap && p.max_delta_diagnostic == q.max_delta_diagnostic &&
         p.min_localized_margin == q.min_localized_margin && p.max_peak_offset == q.max_peak_offset &&
         p.max_tracked_excess == q.max_tracked_excess && p.gap_ok == q.gap_ok &&
         p.localized_ok == q.localized_ok && p.offset_ok == q.offset_ok && p.tracked_ok == q.tracked_ok;
}

Outputs execute(const RunConfig& c) {
  switch (c.command) {
    case Command::Simulate: return simulate(c);
    case Command::Spectrum: return spectrum_command(c);
    case Command::Stability: return stability(c);
    case Command::Monotonicity: return monotonicity(c);
    case Command::Asymptotics: return asymptotics(c);
    case Command::IdentityCheck: return identity_check(c);
    case Command::Approximate: return approximate(c);
  }
  throw UsageError("unknown command");
}

}  // namespace peakon::cli
