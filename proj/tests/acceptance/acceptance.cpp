// One PASS/FAIL line per acceptance criterion, with the measured quantities
// and wall time. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "peakon/cli.hpp"
#include "peakon/experiments.hpp"
#include "peakon/spectral.hpp"

using namespace peakon;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

PeakedField to_field(const oracle::Kernel& k) { return PeakedField(k.a, k.r); }

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// ---------------------------------------------------------------------------

Outcome exact_identities() {
  oracle::RandomFields rng(2024);
  double peak_res = 0.0, train_res = 0.0, min_margin = 1e300;
  for (int k = 0; k < 1000; ++k) {
    const PeakedField u = to_field(rng.positive(6, 12.0));
    const double c = rng.uniform(0.1, 3.0), xi = rng.uniform(-20.0, 20.0);
    peak_res = std::max(peak_res, std::fabs(peak_identity_residual(u, c, xi)));
    // Single-peak fields meet the inequality with equality, so rounding can dip below zero.
    min_margin = std::min(min_margin, peak_inequality_margin(u));
    const std::vector<double> cs = {rng.uniform(0.1, 1.0), rng.uniform(1.0, 2.0), rng.uniform(2.0, 3.0)};
    const std::vector<double> zs = {rng.uniform(-20.0, -5.0), rng.uniform(-5.0, 5.0), rng.uniform(5.0, 20.0)};
    train_res = std::max(train_res, std::fabs(train_identity_residual(u, cs, zs)));
  }
  return {peak_res <= 1e-11 && train_res <= 1e-11 && min_margin >= -1e-11,
          fmt("max |identity residual| %.2e", peak_res) + fmt(", max |global residual| %.2e", train_res) +
              fmt(", min inequality margin %.3e", min_margin)};
}

Outcome invariant_values() {
  double worst = 0.0;
  for (double c : {0.5, 1.0, 3.0}) {
    const PeakedField phi = PeakedField::peakon(c, 0.0);
    worst = std::max({worst, rel(energy(phi), 2 * c * c), rel(moment_f(phi), 4 * c * c * c / 3)});
  }
  return {worst <= 1e-12, fmt("max relative error %.2e", worst)};
}

Outcome conservation() {
  IntegratorOptions opt;
  opt.samples = 501;
  opt.record_spectrum = true;
  const Trajectory tr = integrate(PeakonState{0.0, {3.0, 2.0, 1.0}, {-15.0, 0.0, 15.0}}, 50.0, opt);
  const Observables& o0 = tr.observables.front();
  double e = 0, f = 0, s = 0, l = 0;
  for (const auto& o : tr.observables) {
    e = std::max(e, rel(o.energy, o0.energy));
    f = std::max(f, rel(o.moment_f, o0.moment_f));
    s = std::max(s, rel(o.sum_p, o0.sum_p));
    for (std::size_t i = 0; i < 3; ++i) l = std::max(l, rel(o.spectrum[i], o0.spectrum[i]));
  }
  return {std::max({e, f, s, l}) < 1e-7,
          fmt("drift E %.2e", e) + fmt(", F %.2e", f) + fmt(", sum p %.2e", s) + fmt(", lambda %.2e", l)};
}

Outcome asymptotics() {
  const AsymptoticsReport r = run_asymptotics(PeakonState{0.0, {2.0, 1.0}, {-10.0, 10.0}}, 80.0);
  const double disc = std::sqrt(9.0 - 8.0 * (1.0 - std::exp(-20.0)));
  const std::vector<double> lam = {0.5 * (3.0 - disc), 0.5 * (3.0 + disc)};
  double fp = 0, fv = 0, bp = 0, bv = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    fp = std::max(fp, std::fabs(r.forward.p[i] - lam[i]));
    fv = std::max(fv, std::fabs(r.forward.speed[i] - lam[i]));
    bp = std::max(bp, std::fabs(r.backward.p[i] - lam[1 - i]));
    bv = std::max(bv, std::fabs(r.backward.speed[i] - lam[1 - i]));
  }
  return {std::max({fp, fv, bp, bv}) <= 1e-3,
          fmt("t=+80: |p-lambda| %.2e", fp) + fmt(", |dq/dt-lambda| %.2e", fv) +
              fmt("; t=-80 (descending): %.2e", bp) + fmt(", %.2e", bv)};
}

Outcome monotonicity() {
  const TrainSpec spec = calibrated_train({1.0, 2.0}, 400.0, 0.01, 1);
  const MonotonicityReport r = run_monotonicity(spec, 5.0, 100.0, 201);
  return {r.max_increase <= 100.0 * r.envelope,
          fmt("max increase %.3e", r.max_increase) + fmt(" vs bound %.3e", 100.0 * r.envelope) +
              fmt(" (fitted constant %.3e)", r.constant)};
}

SweepReport& sweep() {
  static SweepReport r = [] {
    StabilityOptions opt;
    opt.t_end = 200.0;
    opt.samples = 200;
    std::vector<TrainSpec> specs;
    for (double eps : {0.04, 0.01, 0.0025}) specs.push_back(calibrated_train({1.0, 2.0}, 50.0, eps, 1));
    return run_stability_sweep(specs, opt, 1);
  }();
  return r;
}

Outcome train_stability() {
  const SweepReport& s = sweep();
  bool gaps = true;
  double min_gap = 1e300;
  for (const auto& r : s.runs) {
    gaps = gaps && r.summary.gap_ok;
    min_gap = std::min(min_gap, r.summary.min_gap);
  }
  std::string ratios;
  for (double v : s.ratio) ratios += fmt(ratios.empty() ? "%.4f" : ", %.4f", v);
  const bool a = s.spread <= 4.0;
  return {a && gaps && s.diagnostic_decreasing,
          "(a) sup d/sqrt(eps) = [" + ratios + "]" + fmt(", spread %.3f <= 4", s.spread) +
              fmt("; (b) min gap %.4f > 25", min_gap) +
              "; (c) diagnostic decreasing: " + (s.diagnostic_decreasing ? "yes" : "no")};
}

Outcome localized_inequality() {
  const SweepReport& s = sweep();
  double m = 1e300;
  std::size_t count = 0;
  for (const auto& r : s.runs) {
    for (const auto& smp : r.samples) {
      for (double v : smp.localized_margin) {
        m = std::min(m, v);
        ++count;
      }
    }
  }
  return {m >= 0.0, fmt("min margin %.4f over ", m) + std::to_string(count) + " interval samples (C_loc = 100)"};
}

Outcome energy_identity() {
  const PeakonState s{0.0, {2.0, 1.0}, {-1.0, 1.0}};
  const WeightProfile g = WeightProfile::psi(4.0, 0.3);
  const IdentityCheck a = check_energy_identity(s, g, 1e-4);
  const IdentityCheck b = check_energy_identity(s, g, 5e-5);
  const double ratio = a.residual / b.residual;
  return {a.residual <= 1e-5 && ratio >= 3.0 && ratio <= 5.0,
          fmt("residual %.3e", a.residual) + fmt(", Richardson ratio %.3f", ratio) +
              fmt(" (printed form residual %.3f, informational)", a.printed_residual)};
}

Outcome oracle_equivalence() {
  oracle::RandomFields rng(909);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const oracle::Kernel a = rng.positive(4, 8.0), b = rng.positive(3, 8.0);
    const PeakedField u = to_field(a), v = to_field(b);
    const WeightProfile w = WeightProfile::psi(rng.uniform(4.0, 8.0), rng.uniform(-5.0, 5.0));
    const double we = oracle::over_field(
        a,
        [&](double x, double m) {
          const double f = oracle::value(a, x), fx = oracle::slope(a, x, m);
          return (f * f + fx * fx) * w(x);
        },
        w.breakpoints());
    worst = std::max({worst, rel(energy(u), oracle::energy(a)), rel(moment_f(u), oracle::moment_f(a)),
                      rel(h1_inner(u, v), oracle::inner(a, b)), rel(weighted_energy(u, w), we)});
  }
  return {worst <= 1e-6, fmt("max relative deviation %.2e over 50 fields", worst)};
}

Outcome determinism() {
  cli::RunConfig c;
  c.command = cli::Command::Stability;
  c.speeds = {1.0, 2.0};
  c.spacing = 50.0;
  c.epsilon = {0.04, 0.01, 0.0025};
  c.seed = 1;
  c.t_end = 200.0;
  cli::validate(c);
  const cli::Outputs a = cli::execute(c);
  c.jobs = 3;
  const cli::Outputs b = cli::execute(c);
  const bool same = a.csv == b.csv && a.json.dump(2) == b.json.dump(2);
  return {same, std::to_string(a.csv.size()) + " CSV bytes, " + std::to_string(a.json.dump(2).size()) +
                    " JSON bytes, identical across runs (jobs 1 and 3): " + (same ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "exact identities", 1.0, exact_identities},
      {2, "invariant values", 1.0, invariant_values},
      {3, "conservation", 5.0, conservation},
      {4, "isospectral asymptotics", 5.0, asymptotics},
      {5, "weighted energy monotonicity", 30.0, monotonicity},
      {6, "train stability", 120.0, train_stability},
      {7, "localized inequality", 120.0, localized_inequality},
      {8, "weighted energy identity", 10.0, energy_identity},
      {9, "oracle equivalence", 30.0, oracle_equivalence},
      {10, "determinism", 600.0, determinism},
  };
  int failures = 0;
  for (const Criterion& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s %2d %s: %s [%.2f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
