#include "peakon/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "peakon/errors.hpp"
#include "peakon/numeric.hpp"
#include "peakon/optimize.hpp"
#include "peakon/spectral.hpp"

namespace peakon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kNewtonIterations = 50;
constexpr double kNewtonTol = 1e-10;
constexpr double kIdentityTol = 1e-13;

double kappa(double s) { return s * std::exp(-std::fabs(s)); }
double kappa_prime(double s) { return (1.0 - std::fabs(s)) * std::exp(-std::fabs(s)); }

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

bool increasing(std::span<const double> x) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) return false;
  }
  return true;
}

std::vector<double> midpoints(std::span<const double> x) {
  std::vector<double> y;
  for (std::size_t i = 1; i < x.size(); ++i) y.push_back(0.5 * (x[i - 1] + x[i]));
  return y;
}

std::vector<double> uniform_times(double t_end, std::size_t samples) {
  const std::size_t m = std::max<std::size_t>(samples, 2);
  std::vector<double> t(m);
  for (std::size_t k = 0; k < m; ++k) t[k] = t_end * static_cast<double>(k) / static_cast<double>(m - 1);
  t.back() = t_end;
  return t;
}

// Follows the modulated centres along a trajectory, falling back to the
// peak positions when Newton fails.
class Tracker {
 public:
  Tracker(std::vector<double> speeds, std::vector<double> start)
      : speeds_(std::move(speeds)), x_(std::move(start)) {}

  bool update(const PeakedField& u, double t) {
    std::vector<double> guess = x_;
    for (std::size_t i = 0; i < guess.size(); ++i) guess[i] += speeds_[i] * (t - t_);
    t_ = t;
    try {
      x_ = modulate(u, speeds_, guess).x;
      return true;
    } catch (const ConvergenceError&) {
      x_ = locate_peaks(u, midpoints(guess));
      return false;
    } catch (const DomainError&) {
      x_ = locate_peaks(u, midpoints(guess));
      return false;
    }
  }

  const std::vector<double>& centers() const { return x_; }

 private:
  std::vector<double> speeds_;
  std::vector<double> x_;
  double t_ = 0.0;
};

constexpr double kSnapRadius = 1e-5;
constexpr double kPolishScale = 1e-7;
constexpr double kPolishDiameter = 1e-13;

void snap_to_nodes(const Objective& f, const PeakedField& u, std::vector<double>& x,
                   double& value) {
  const auto nodes = u.nodes();
  if (nodes.empty()) return;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), x[i]);
    for (auto c : {it, it == nodes.begin() ? it : it - 1}) {
      if (c == nodes.end() || std::fabs(*c - x[i]) > kSnapRadius) continue;
      std::vector<double> trial = x;
      trial[i] = *c;
      const double v = f(trial);
      if (v <= value) {
        x = std::move(trial);
        value = v;
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

double max_value(const PeakedField& u) {
  double m = u.empty() ? 0.0 : -kInf;
  for (double r : u.nodes()) m = std::max(m, eval(u, r));
  return m;
}

double peak_identity_residual(const PeakedField& u, double c, double xi) {
  const PeakedField w = u - PeakedField::peakon(c, xi);
  CompensatedSum s;
  s += energy(u);
  s += -2.0 * c * c;
  s += -h1_inner(w, w);
  s += -4.0 * c * eval(u, xi);
  s += 4.0 * c * c;
  return s.value();
}

double peak_inequality_margin(const PeakedField& u) {
  const double m = max_value(u);
  return m * energy(u) - 2.0 / 3.0 * m * m * m - moment_f(u);
}

double train_identity_residual(const PeakedField& u, std::span<const double> speeds,
                       std::span<const double> shifts) {
  const PeakedField r = train(speeds, shifts);
  const PeakedField w = u - r;
  CompensatedSum s;
  s += h1_inner(w, w);
  s += -energy(u);
  s += -energy(r);
  for (std::size_t i = 0; i < speeds.size(); ++i) s += 4.0 * speeds[i] * eval(u, shifts[i]);
  return s.value();
}

// ---------------------------------------------------------------------------

std::vector<double> locate_peaks(const PeakedField& u, std::span<const double> cuts) {
  if (!increasing(cuts)) throw DomainError("locate_peaks: partition points must increase");
  const auto nodes = u.nodes();
  const std::size_t n = cuts.size() + 1;
  std::vector<double> peaks(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = i == 0 ? -kInf : cuts[i - 1];
    const double hi = i + 1 == n ? kInf : cuts[i];
    std::vector<double> cand;
    if (std::isfinite(lo)) cand.push_back(lo);
    for (double r : nodes) {
      if (r > lo && r < hi) cand.push_back(r);
    }
    if (std::isfinite(hi)) cand.push_back(hi);
    if (cand.empty()) cand.push_back(0.0);  // N = 1 and u = 0
    double best = cand.front();
    double best_value = eval(u, best);
    for (std::size_t k = 1; k < cand.size(); ++k) {
      const double v = eval(u, cand[k]);
      if (v > best_value) {
        best_value = v;
        best = cand[k];
      }
    }
    peaks[i] = best;
  }
  return peaks;
}

std::vector<double> modulation_residual(const PeakedField& u, std::span<const double> speeds,
                                        std::span<const double> x) {
  if (speeds.size() != x.size()) throw DomainError("modulation_residual: length mismatch");
  const auto amps = u.amps();
  const auto nodes = u.nodes();
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CompensatedSum s;
    for (std::size_t k = 0; k < amps.size(); ++k) s += amps[k] * kappa(x[i] - nodes[k]);
    for (std::size_t j = 0; j < x.size(); ++j) s += -speeds[j] * kappa(x[i] - x[j]);
    y[i] = speeds[i] * s.value();
  }
  return y;
}

ModulationResult modulate(const PeakedField& u, std::span<const double> speeds,
                          std::span<const double> guess) {
  const std::size_t n = speeds.size();
  if (guess.size() != n) throw DomainError("modulate: guess length differs from speeds");
  if (!increasing(guess)) throw ModulationFailure("modulate: guess must be increasing");
  const auto amps = u.amps();
  const auto nodes = u.nodes();

  ModulationResult res{std::vector<double>(guess.begin(), guess.end()), 0, 0.0};
  std::vector<double> y = modulation_residual(u, speeds, res.x);
  res.residual = max_abs(y);
  while (res.residual > kNewtonTol) {
    if (res.iterations == kNewtonIterations) {
      throw ModulationFailure("modulate: Newton did not converge in 50 iterations");
    }
    ++res.iterations;
    std::vector<double> jac(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      CompensatedSum diag;
      for (std::size_t k = 0; k < amps.size(); ++k) diag += amps[k] * kappa_prime(res.x[i] - nodes[k]);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double kp = kappa_prime(res.x[i] - res.x[j]);
        diag += -speeds[j] * kp;
        jac[i * n + j] = speeds[i] * speeds[j] * kp;
      }
      jac[i * n + i] = speeds[i] * diag.value();
    }
    std::vector<double> rhs_vec(n);
    for (std::size_t i = 0; i < n; ++i) rhs_vec[i] = -y[i];
    std::vector<double> step;
    try {
      step = solve_linear(jac, rhs_vec);
    } catch (const DomainError&) {
      throw ModulationFailure("modulate: singular Jacobian");
    }
    double damping = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 30; ++halving, damping *= 0.5) {
      std::vector<double> trial = res.x;
      for (std::size_t i = 0; i < n; ++i) trial[i] += damping * step[i];
      if (!increasing(trial)) continue;
      std::vector<double> ty = modulation_residual(u, speeds, trial);
      const double tr = max_abs(ty);
      if (tr < res.residual) {
        res.x = std::move(trial);
        y = std::move(ty);
        res.residual = tr;
        accepted = true;
        break;
      }
    }
    if (!accepted) throw ModulationFailure("modulate: line search failed");
  }
  return res;
}

double shift_objective(const PeakedField& u, std::span<const double> speeds,
                       std::span<const double> x) {
  CompensatedSum s;
  s += energy(u);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      s += 2.0 * speeds[i] * speeds[j] * std::exp(-std::fabs(x[i] - x[j]));
    }
    s += -4.0 * speeds[i] * eval(u, x[i]);
  }
  return s.value();
}

ShiftDistance min_shift_distance(const PeakedField& u, std::span<const double> speeds,
                                 std::span<const double> init) {
  if (speeds.size() != init.size()) throw DomainError("min_shift_distance: length mismatch");
  if (!increasing(init)) throw DomainError("min_shift_distance: init must be increasing");
  const double e = energy(u);
  const Objective f = [&](std::span<const double> x) {
    CompensatedSum s;
    s += e;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        s += 2.0 * speeds[i] * speeds[j] * std::exp(-std::fabs(x[i] - x[j]));
      }
      s += -4.0 * speeds[i] * eval(u, x[i]);
    }
    return s.value();
  };
  NelderMeadResult nm = nelder_mead(f, std::vector<double>(init.begin(), init.end()));
  // The objective has kinks at the nodes of u, where the minimiser usually
  // sits; snap onto them and shrink the simplex around the result.
  for (int pass = 0; pass < 2; ++pass) {
    snap_to_nodes(f, u, nm.x, nm.value);
    NelderMeadOptions fine;
    fine.initial_scale = kPolishScale;
    fine.diameter_tol = kPolishDiameter;
    fine.restarts = 0;
    const NelderMeadResult polished = nelder_mead(f, nm.x, fine);
    if (polished.value <= nm.value) {
      nm.x = polished.x;
      nm.value = polished.value;
    }
  }
  snap_to_nodes(f, u, nm.x, nm.value);
  ShiftDistance out;
  out.x = nm.x;
  out.objective = nm.value;
  out.converged = nm.converged;
  out.ordered = increasing(out.x);
  out.d = h1_dist(u, train(speeds, out.x));
  return out;
}

// ---------------------------------------------------------------------------

void validate(const TrainSpec& spec) {
  std::vector<std::string> errors;
  const std::size_t n = spec.speeds.size();
  if (n == 0) errors.push_back("speeds must be non-empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(spec.speeds[i] > 0.0) || !std::isfinite(spec.speeds[i])) {
      errors.push_back("speeds must be positive");
      break;
    }
  }
  if (!increasing(spec.speeds)) errors.push_back("speeds must be strictly increasing");
  if (spec.shifts.size() != n) errors.push_back("shifts must have one entry per speed");
  if (!(spec.spacing > 0.0) || !std::isfinite(spec.spacing)) errors.push_back("L must be positive");
  if (spec.shifts.size() == n) {
    for (std::size_t i = 1; i < n; ++i) {
      if (!(spec.shifts[i] - spec.shifts[i - 1] >= spec.spacing * (1.0 - 1e-12))) {
        errors.push_back("shifts must be at least L apart");
        break;
      }
    }
  }
  if (!(spec.epsilon >= 0.0)) errors.push_back("epsilon must be nonnegative");
  const Perturbation& p = spec.perturbation;
  if (!p.amp_jitter.empty() && p.amp_jitter.size() != n) errors.push_back("amp_jitter length must equal N");
  if (!p.node_jitter.empty() && p.node_jitter.size() != n) errors.push_back("node_jitter length must equal N");
  if (!(p.scale >= 0.0)) errors.push_back("perturbation scale must be nonnegative");
  for (const MicroPeakon& m : p.micro) {
    if (!(m.amp > 0.0)) {
      errors.push_back("micro peakon amplitudes must be positive");
      break;
    }
  }
  for (std::size_t i = 0; i < p.amp_jitter.size() && i < n; ++i) {
    if (!(1.0 + p.scale * p.amp_jitter[i] > 0.0)) {
      errors.push_back("perturbed amplitudes must stay positive");
      break;
    }
  }
  if (!errors.empty()) {
    std::ostringstream msg;
    for (std::size_t i = 0; i < errors.size(); ++i) msg << (i ? "; " : "") << errors[i];
    throw ConstraintError(msg.str());
  }
}

std::vector<double> equally_spaced(std::size_t n, double spacing) {
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = spacing * static_cast<double>(i);
  return z;
}

Perturbation random_direction(std::span<const double> speeds, std::span<const double> shifts,
                              double spacing, std::uint64_t seed, std::size_t micro_count) {
  SplitMix64 rng(seed);
  Perturbation p;
  for (std::size_t i = 0; i < speeds.size(); ++i) p.amp_jitter.push_back(rng.uniform(-1.0, 1.0));
  for (std::size_t i = 0; i < speeds.size(); ++i) p.node_jitter.push_back(rng.uniform(-1.0, 1.0));
  const double lo = shifts.front() - 0.5 * spacing;
  const double hi = shifts.back() + 0.5 * spacing;
  for (std::size_t k = 0; k < micro_count; ++k) {
    const double amp = rng.uniform(0.5, 1.0);
    double pos = rng.uniform(lo, hi);
    for (double z : shifts) {
      if (std::fabs(pos - z) < 1.0) pos = z + std::copysign(1.0, pos - z);
    }
    p.micro.push_back({amp, pos});
  }
  return p;
}

PeakedField initial_field(const TrainSpec& spec) {
  validate(spec);
  const Perturbation& p = spec.perturbation;
  std::vector<double> amps;
  std::vector<double> nodes;
  for (std::size_t i = 0; i < spec.speeds.size(); ++i) {
    const double a = p.amp_jitter.empty() ? 0.0 : p.amp_jitter[i];
    const double n = p.node_jitter.empty() ? 0.0 : p.node_jitter[i];
    amps.push_back(spec.speeds[i] * (1.0 + p.scale * a));
    nodes.push_back(spec.shifts[i] + p.scale * n);
  }
  if (p.scale > 0.0) {
    for (const MicroPeakon& m : p.micro) {
      amps.push_back(p.scale * m.amp);
      nodes.push_back(m.position);
    }
  }
  return PeakedField(std::move(amps), std::move(nodes));
}

PeakonState initial_state(const TrainSpec& spec) {
  const PeakedField u = initial_field(spec);
  PeakonState s{0.0, {u.amps().begin(), u.amps().end()}, {u.nodes().begin(), u.nodes().end()}};
  s.validate();
  return s;
}

TrainSpec calibrated_train(std::vector<double> speeds, double spacing, double epsilon,
                           std::uint64_t seed, std::size_t micro_count) {
  TrainSpec spec;
  spec.shifts = equally_spaced(speeds.size(), spacing);
  spec.speeds = std::move(speeds);
  spec.spacing = spacing;
  spec.epsilon = epsilon;
  spec.seed = seed;
  spec.perturbation = random_direction(spec.speeds, spec.shifts, spacing, seed, micro_count);
  validate(spec);
  if (epsilon == 0.0) return spec;

  const double target = epsilon * epsilon;
  auto distance = [&](double s) {
    TrainSpec trial = spec;
    trial.perturbation.scale = s;
    return min_shift_distance(initial_field(trial), spec.speeds, spec.shifts).d;
  };
  double s0 = target;
  double d0 = distance(s0);
  double s1 = s0 * target / d0;
  for (int it = 0; it < 40; ++it) {
    const double d1 = distance(s1);
    if (std::fabs(d1 / target - 1.0) <= 1e-6) {
      spec.perturbation.scale = s1;
      validate(spec);
      return spec;
    }
    const double slope = (std::log(d1) - std::log(d0)) / (std::log(s1) - std::log(s0));
    const double next = std::exp(std::log(s1) + (std::log(target) - std::log(d1)) /
                                                    (std::isfinite(slope) && slope > 0.1 ? slope : 1.0));
    s0 = s1;
    d0 = d1;
    s1 = next;
  }
  throw ConvergenceError("calibrated_train: perturbation scale did not converge");
}

// ---------------------------------------------------------------------------

StabilityReport run_stability(const TrainSpec& spec, const StabilityOptions& options) {
  validate(spec);
  const double L = spec.spacing;
  const double K = options.scale > 0.0 ? options.scale : default_scale(L);
  if (!(K >= 4.0)) throw ConstraintError("K must be >= 4");
  const std::size_t n = spec.speeds.size();
  const PeakonState s0 = initial_state(spec);
  const double norm0 = std::sqrt(energy(field(s0)));
  const double slack = options.localized_constant * norm0 * norm0 * norm0 / std::sqrt(L);
  const double tail = static_cast<double>(n) * std::exp(-L / 8.0);

  IntegratorOptions io;
  io.tol = options.tol;
  io.sample_times = uniform_times(options.t_end, options.samples);
  const Trajectory traj = integrate(s0, options.t_end, io);

  StabilityReport rep{spec, K, {}, {}};
  StabilitySummary& sum = rep.summary;
  sum.min_gap = kInf;
  sum.min_localized_margin = kInf;
  sum.max_tracked_excess = -kInf;
  Tracker tracker(spec.speeds, spec.shifts);

  for (const PeakonState& st : traj.states) {
    const PeakedField u = field(st);
    StabilitySample smp;
    smp.t = st.t;
    smp.modulation_converged = tracker.update(u, st.t);
    smp.modulated = tracker.centers();
    const std::vector<double> cuts = midpoints(smp.modulated);
    smp.peaks = locate_peaks(u, cuts);

    const ShiftDistance sd = min_shift_distance(u, spec.speeds, smp.peaks);
    smp.d = sd.d;
    smp.shifts = sd.x;
    smp.tracked_distance = h1_dist(u, train(spec.speeds, smp.peaks));

    for (std::size_t i = 1; i < n; ++i) smp.gaps.push_back(smp.peaks[i] - smp.peaks[i - 1]);
    CompensatedSum diag;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = spec.speeds[i] - eval(u, smp.peaks[i]);
      smp.delta.push_back(d);
      diag += d * d * (spec.speeds[i] - d / 3.0);
    }
    smp.delta_diagnostic = diag.value();
    for (double y : cuts) smp.weighted.push_back(weighted_energy(u, WeightProfile::psi(K, y)));

    const std::vector<WeightProfile> phi = partition(cuts, K);
    for (std::size_t i = 0; i < n; ++i) {
      const double m = eval(u, smp.peaks[i]);
      const double e = weighted_energy(u, phi[i]);
      const double f = weighted_f(u, phi[i]);
      smp.localized_margin.push_back(m * e - 2.0 / 3.0 * m * m * m + slack - f);
    }

    sum.sup_d = std::max(sum.sup_d, smp.d);
    for (double g : smp.gaps) sum.min_gap = std::min(sum.min_gap, g);
    sum.max_delta_diagnostic = std::max(sum.max_delta_diagnostic, smp.delta_diagnostic);
    for (double m : smp.localized_margin) sum.min_localized_margin = std::min(sum.min_localized_margin, m);
    for (std::size_t i = 0; i < n; ++i) {
      sum.max_peak_offset = std::max(sum.max_peak_offset, std::fabs(smp.peaks[i] - smp.modulated[i]));
    }
    sum.max_tracked_excess =
        std::max(sum.max_tracked_excess, smp.tracked_distance - (10.0 * smp.d + tail));
    rep.samples.push_back(std::move(smp));
  }
  if (n < 2) sum.min_gap = kInf;
  sum.gap_ok = n < 2 || sum.min_gap > 0.5 * L;
  sum.localized_ok = sum.min_localized_margin >= 0.0;
  sum.offset_ok = sum.max_peak_offset <= L / 12.0;
  sum.tracked_ok = sum.max_tracked_excess <= 0.0;
  return rep;
}

SweepReport run_stability_sweep(const std::vector<TrainSpec>& specs,
                                const StabilityOptions& options, std::size_t jobs) {
  SweepReport out;
  out.runs.resize(specs.size());
  std::vector<std::exception_ptr> errors(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      try {
        out.runs[i] = run_stability(specs[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, specs.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  double lo = kInf;
  for (const StabilityReport& r : out.runs) {
    const double ratio = r.spec.epsilon > 0.0 ? r.summary.sup_d / std::sqrt(r.spec.epsilon) : 0.0;
    out.ratio.push_back(ratio);
    out.sweep_constant = std::max(out.sweep_constant, ratio);
    lo = std::min(lo, ratio);
  }
  out.spread = lo > 0.0 ? out.sweep_constant / lo : kInf;
  // Diagnostic must shrink together with epsilon.
  for (std::size_t i = 0; i < out.runs.size(); ++i) {
    for (std::size_t j = 0; j < out.runs.size(); ++j) {
      if (out.runs[j].spec.epsilon < out.runs[i].spec.epsilon &&
          !(out.runs[j].summary.max_delta_diagnostic < out.runs[i].summary.max_delta_diagnostic)) {
        out.diagnostic_decreasing = false;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

MonotonicityReport run_monotonicity(const TrainSpec& spec, double scale, double t_end,
                                    std::size_t samples, double tol) {
  validate(spec);
  const double L = spec.spacing;
  if (!(scale >= 4.0)) throw ConstraintError("K must be >= 4");
  if (!(scale <= std::sqrt(L))) throw ConstraintError("K must be <= sqrt(L)");
  if (!(t_end > 0.0)) throw ConstraintError("t_end must be positive");

  IntegratorOptions io;
  io.tol = tol;
  io.sample_times = uniform_times(t_end, samples);
  const Trajectory traj = integrate(initial_state(spec), t_end, io);

  MonotonicityReport rep;
  rep.envelope = std::exp(-sigma0(spec.speeds) * L / (8.0 * scale));
  Tracker tracker(spec.speeds, spec.shifts);
  for (const PeakonState& st : traj.states) {
    const PeakedField u = field(st);
    tracker.update(u, st.t);
    std::vector<double> row;
    for (double y : midpoints(tracker.centers())) {
      row.push_back(weighted_energy(u, WeightProfile::psi(scale, y)));
    }
    rep.t.push_back(st.t);
    rep.weighted.push_back(std::move(row));
  }
  rep.max_increase = -kInf;
  for (const auto& row : rep.weighted) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      rep.max_increase = std::max(rep.max_increase, row[j] - rep.weighted.front()[j]);
    }
  }
  if (rep.weighted.front().empty()) rep.max_increase = 0.0;
  rep.constant = rep.max_increase / rep.envelope;
  rep.ok = rep.max_increase <= 100.0 * rep.envelope;
  return rep;
}

std::vector<double> reference_line_energy(const PeakonState& s0, double y0, double speed,
                                          double scale, double t_end, std::size_t samples,
                                          double tol) {
  IntegratorOptions io;
  io.tol = tol;
  std::vector<double> times = uniform_times(t_end, samples);
  for (double& t : times) t += s0.t;
  io.sample_times = times;
  const Trajectory traj = integrate(s0, s0.t + t_end, io);
  std::vector<double> out;
  for (const PeakonState& st : traj.states) {
    out.push_back(weighted_energy(field(st), WeightProfile::psi(scale, y0 + speed * (st.t - s0.t))));
  }
  return out;
}

// ---------------------------------------------------------------------------

AsymptoticsReport run_asymptotics(const PeakonState& s0, double horizon, double tol) {
  s0.validate();
  if (!(horizon > 0.0)) throw ConstraintError("asymptotics horizon must be positive");
  AsymptoticsReport rep;
  rep.lambda = spectrum(s0).lambda;
  auto side = [&](double t_end, bool ascending) {
    AsymptoticSide out;
    out.t = t_end;
    out.target = rep.lambda;
    if (!ascending) std::reverse(out.target.begin(), out.target.end());
    const PeakonState s = advance(s0, t_end, tol);
    out.p = s.p;
    out.speed = rhs(s).dq;
    for (std::size_t i = 0; i < s.size(); ++i) {
      out.max_p_error = std::max(out.max_p_error, std::fabs(out.p[i] - out.target[i]));
      out.max_speed_error = std::max(out.max_speed_error, std::fabs(out.speed[i] - out.target[i]));
    }
    out.distance = min_shift_distance(field(s), out.target, s.q).d;
    return out;
  };
  rep.forward = side(s0.t + horizon, true);
  rep.backward = side(s0.t - horizon, false);
  return rep;
}

// ---------------------------------------------------------------------------

double energy_flux(const PeakedField& u, const WeightProfile& g) {
  const PiecewiseExp f = PiecewiseExp::from_field(u);
  const PiecewiseExp fx = PiecewiseExp::derivative_of(u);
  const PiecewiseExp ux2 = fx * fx;
  const PiecewiseExp nonlocal = f * helmholtz_inverse((f * f).scaled(2.0) + ux2);
  CompensatedSum s;
  s += weighted_integral(f * ux2, g, 1);
  s += weighted_integral(nonlocal, g, 1);
  return s.value();
}

double printed_energy_flux(const PeakedField& u, const WeightProfile& g) {
  const PiecewiseExp f = PiecewiseExp::from_field(u);
  const PiecewiseExp fx = PiecewiseExp::derivative_of(u);
  const PiecewiseExp u2 = f * f;
  const PiecewiseExp ux2 = fx * fx;
  const PiecewiseExp u3 = u2 * f;
  const PiecewiseExp flux = u3 + (f * ux2).scaled(4.0);
  const PiecewiseExp nonlocal = f * helmholtz_inverse(u2.scaled(2.0) + ux2);
  CompensatedSum s;
  s += weighted_integral(flux, g, 1);
  s += -weighted_integral(u3, g, 3);
  s += -weighted_integral(nonlocal, g, 1);
  return s.value();
}

IdentityCheck check_energy_identity(const PeakonState& s, const WeightProfile& g, double h) {
  s.validate();
  if (!(h >= 1e-5 && h <= 1e-2)) throw ConstraintError("h must lie in [1e-5, 1e-2]");
  const PeakonState plus = advance(s, s.t + h, kIdentityTol);
  const PeakonState minus = advance(s, s.t - h, kIdentityTol);
  IdentityCheck out;
  out.lhs = (weighted_energy(field(plus), g) - weighted_energy(field(minus), g)) / (2.0 * h);
  out.rhs = energy_flux(field(s), g);
  out.residual = std::fabs(out.lhs - out.rhs);
  out.printed_rhs = printed_energy_flux(field(s), g);
  out.printed_residual = std::fabs(out.lhs - out.printed_rhs);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Histogram {
  std::vector<double> edges;
  std::vector<double> heights;
};

constexpr int kGaussianBins = 400;
constexpr double kGaussianWidth = 8.0;

Histogram gaussian_histogram(const Gaussian& g) {
  Histogram h;
  const double lo = g.mean - kGaussianWidth * g.sigma;
  const double w = 2.0 * kGaussianWidth * g.sigma / kGaussianBins;
  auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - g.mean) / (g.sigma * std::sqrt(2.0))); };
  for (int k = 0; k <= kGaussianBins; ++k) h.edges.push_back(lo + w * k);
  h.edges.back() = g.mean + kGaussianWidth * g.sigma;
  for (int k = 0; k < kGaussianBins; ++k) {
    const double mass = g.mass * (cdf(h.edges[k + 1]) - cdf(h.edges[k]));
    h.heights.push_back(mass / (h.edges[k + 1] - h.edges[k]));
  }
  return h;
}

double histogram_height(const Histogram& h, double x) {
  if (x < h.edges.front() || x >= h.edges.back()) return 0.0;
  const auto it = std::upper_bound(h.edges.begin(), h.edges.end(), x);
  return h.heights[static_cast<std::size_t>(it - h.edges.begin()) - 1];
}

Histogram to_histogram(const DensitySpec& density) {
  if (const auto* grid = std::get_if<GridDensity>(&density)) {
    if (!(grid->dx > 0.0) || grid->values.empty()) throw DomainError("grid density needs dx > 0 and samples");
    Histogram h;
    for (std::size_t k = 0; k <= grid->values.size(); ++k) {
      h.edges.push_back(grid->x0 + (static_cast<double>(k) - 0.5) * grid->dx);
    }
    for (double v : grid->values) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("density must be nonnegative and finite");
      h.heights.push_back(v);
    }
    return h;
  }
  const auto& mix = std::get<MixtureDensity>(density);
  std::vector<Histogram> parts;
  for (const Box& b : mix.boxes) {
    if (!(b.hi > b.lo) || !(b.height >= 0.0) || !std::isfinite(b.height)) {
      throw DomainError("box needs lo < hi and a nonnegative height");
    }
    parts.push_back({{b.lo, b.hi}, {b.height}});
  }
  for (const Gaussian& g : mix.gaussians) {
    if (!(g.sigma > 0.0) || !(g.mass >= 0.0) || !std::isfinite(g.mass)) {
      throw DomainError("gaussian needs sigma > 0 and a nonnegative mass");
    }
    parts.push_back(gaussian_histogram(g));
  }
  if (parts.empty()) throw DomainError("density has no components");
  std::vector<double> edges;
  for (const Histogram& p : parts) edges.insert(edges.end(), p.edges.begin(), p.edges.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  Histogram h{edges, {}};
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double mid = 0.5 * (edges[k] + edges[k + 1]);
    double height = 0.0;
    for (const Histogram& p : parts) height += histogram_height(p, mid);
    h.heights.push_back(height);
  }
  return h;
}

}  // namespace

PiecewiseExp density_histogram(const DensitySpec& density) {
  const Histogram h = to_histogram(density);
  return PiecewiseExp::histogram(h.edges, h.heights);
}

DensityApproximation approximate_from_density(const DensitySpec& density, std::size_t count) {
  if (count == 0) throw DomainError("approximate_from_density: count must be positive");
  const Histogram h = to_histogram(density);
  const std::size_t cells = h.heights.size();
  std::vector<double> cum(cells + 1, 0.0);
  for (std::size_t k = 0; k < cells; ++k) cum[k + 1] = cum[k] + h.heights[k] * (h.edges[k + 1] - h.edges[k]);
  const double total = cum.back();
  if (!(total > 0.0)) throw DomainError("approximate_from_density: zero total mass");

  // Position where the cumulative mass reaches m.
  auto quantile = [&](double m) {
    for (std::size_t k = 0; k < cells; ++k) {
      if (cum[k + 1] >= m && h.heights[k] > 0.0) {
        return std::min(h.edges[k + 1], h.edges[k] + (m - cum[k]) / h.heights[k]);
      }
    }
    return h.edges.back();
  };
  std::vector<double> bounds{h.edges.front()};
  for (std::size_t j = 1; j < count; ++j) {
    bounds.push_back(quantile(total * static_cast<double>(j) / static_cast<double>(count)));
  }
  bounds.push_back(h.edges.back());

  DensityApproximation out;
  out.mass = total;
  for (std::size_t j = 0; j < count; ++j) {
    CompensatedSum mass;
    CompensatedSum moment;
    for (std::size_t k = 0; k < cells; ++k) {
      const double a = std::max(h.edges[k], bounds[j]);
      const double b = std::min(h.edges[k + 1], bounds[j + 1]);
      if (!(b > a) || h.heights[k] == 0.0) continue;
      mass += h.heights[k] * (b - a);
      moment += h.heights[k] * 0.5 * (b - a) * (b + a);
    }
    if (!(mass.value() > 0.0)) continue;
    out.state.p.push_back(0.5 * mass.value());
    out.state.q.push_back(moment.value() / mass.value());
  }
  out.state.validate();

  out.density = PiecewiseExp::histogram(h.edges, h.heights);
  out.target = helmholtz_inverse(out.density);
  const PeakedField un = field(out.state);
  CompensatedSum d2;
  d2 += energy(un);
  for (std::size_t i = 0; i < out.state.size(); ++i) {
    d2 += -4.0 * out.state.p[i] * out.target(out.state.q[i]);
  }
  d2 += (out.target * out.density).integral();
  out.distance = std::sqrt(std::max(0.0, d2.value()));
  return out;
}

}  // namespace peakon
