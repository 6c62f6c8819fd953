#include "peakon/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "peakon/errors.hpp"
#include "peakon/functionals.hpp"
#include "peakon/numeric.hpp"
#include "peakon/spectral.hpp"

namespace peakon {

namespace {

using Vec = std::vector<double>;

double sgn(double x) noexcept { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// y = (q_1..q_N, p_1..p_N).
void vector_field(const Vec& y, Vec& dy) {
  const std::size_t n = y.size() / 2;
  const double* q = y.data();
  const double* p = y.data() + n;
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum dq;
    CompensatedSum dp;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = q[i] - q[j];
      const double k = std::exp(-std::fabs(d));
      dq += p[j] * k;
      dp += p[i] * p[j] * sgn(d) * k;
    }
    dy[i] = dq.value();
    dy[n + i] = dp.value();
  }
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension of order 4.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kMaxShrink = 5.0;   // h_new >= h / 5
constexpr double kMaxGrowth = 10.0;  // h_new <= 10 h

struct Guard {
  bool ok;
  std::size_t pair;
};

Guard check_guard(const Vec& y, double gap_tol) {
  const std::size_t n = y.size() / 2;
  Guard g{true, 0};
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double gap = y[i + 1] - y[i];
    if (gap < min_gap) {
      min_gap = gap;
      g.pair = i;
    }
  }
  if (n > 1 && !(min_gap >= gap_tol)) g.ok = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(y[n + i] > 0.0)) g.ok = false;
  }
  return g;
}

PeakonState to_state(double t, const Vec& y) {
  const std::size_t n = y.size() / 2;
  return PeakonState{t, Vec(y.begin() + n, y.end()), Vec(y.begin(), y.begin() + n)};
}

Observables observe(const PeakonState& s, bool with_spectrum) {
  const PeakedField u = field(s);
  Observables o{energy(u), moment_f(u), 0.0, {}};
  CompensatedSum sp;
  for (double p : s.p) sp += p;
  o.sum_p = sp.value();
  if (with_spectrum && s.size() > 0) o.spectrum = spectrum(s).lambda;
  return o;
}

double error_norm(const Vec& y0, const Vec& y1, const Vec& err, double tol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double sk = tol + tol * std::max(std::fabs(y0[i]), std::fabs(y1[i]));
    sum += (err[i] / sk) * (err[i] / sk);
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

double initial_step(const Vec& y0, const Vec& f0, double tol, double hmax, double dir) {
  const std::size_t m = y0.size();
  double dnf = 0.0;
  double dny = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double sk = tol + tol * std::fabs(y0[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (y0[i] / sk) * (y0[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, hmax);
  Vec y1(m), f1(m);
  for (std::size_t i = 0; i < m; ++i) y1[i] = y0[i] + dir * h * f0[i];
  vector_field(y1, f1);
  double der2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double sk = tol + tol * std::fabs(y0[i]);
    der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
  }
  der2 = std::sqrt(der2) / h;
  const double der12 = std::max(std::fabs(der2), std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * h, h1, hmax});
}

}  // namespace

void PeakonState::validate() const {
  if (p.size() != q.size()) throw StateError("PeakonState: p and q differ in length");
  if (!std::isfinite(t)) throw StateError("PeakonState: non-finite time");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || !std::isfinite(q[i])) {
      throw StateError("PeakonState: non-finite component");
    }
    if (!(p[i] > 0.0)) throw StateError("PeakonState: momenta must be positive");
    if (i > 0 && !(q[i] > q[i - 1])) {
      throw StateError("PeakonState: positions must be strictly increasing");
    }
  }
}

PeakonState PeakonState::mirrored() const {
  PeakonState m{-t, Vec(p.rbegin(), p.rend()), Vec(q.rbegin(), q.rend())};
  for (double& x : m.q) x = -x;
  return m;
}

Derivative rhs(const PeakonState& s) {
  s.validate();
  const std::size_t n = s.size();
  Vec y(2 * n), dy(2 * n);
  std::copy(s.q.begin(), s.q.end(), y.begin());
  std::copy(s.p.begin(), s.p.end(), y.begin() + n);
  vector_field(y, dy);
  return {Vec(dy.begin(), dy.begin() + n), Vec(dy.begin() + n, dy.end())};
}

double hamiltonian(const PeakonState& s) {
  s.validate();
  CompensatedSum h;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      h += 0.5 * s.p[i] * s.p[j] * std::exp(-std::fabs(s.q[i] - s.q[j]));
    }
  }
  return h.value();
}

PeakedField field(const PeakonState& s) { return PeakedField(s.p, s.q); }

Trajectory integrate(const PeakonState& s0, double t_end, const IntegratorOptions& options) {
  s0.validate();
  if (!(options.tol >= 1e-13 && options.tol <= 1e-6)) {
    throw ConstraintError("integrate: tol must lie in [1e-13, 1e-6]");
  }
  if (!std::isfinite(t_end)) throw DomainError("integrate: non-finite end time");

  const double t0 = s0.t;
  const double dir = t_end >= t0 ? 1.0 : -1.0;

  Vec times;
  if (options.sample_times) {
    times = *options.sample_times;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if ((times[i] - t0) * dir < 0.0 || (times[i] - t_end) * dir > 0.0 ||
          (i > 0 && !((times[i] - times[i - 1]) * dir > 0.0))) {
        throw DomainError("integrate: sample times must be monotone inside [t0, t_end]");
      }
    }
  } else {
    const std::size_t m = std::max<std::size_t>(options.samples, 2);
    times.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      times[k] = t0 + (t_end - t0) * static_cast<double>(k) / static_cast<double>(m - 1);
    }
    times.back() = t_end;
  }

  Trajectory traj;
  std::size_t next = 0;
  auto record = [&](const PeakonState& s) {
    traj.states.push_back(s);
    traj.observables.push_back(observe(s, options.record_spectrum));
  };
  while (next < times.size() && times[next] == t0) {
    PeakonState s = s0;
    s.t = t0;
    record(s);
    ++next;
  }
  if (t_end == t0 || s0.size() == 0) {
    while (next < times.size()) {
      PeakonState s = s0;
      s.t = times[next++];
      record(s);
    }
    return traj;
  }

  const std::size_t n = s0.size();
  const std::size_t m = 2 * n;
  Vec y(m), y1(m), tmp(m), err(m);
  std::copy(s0.q.begin(), s0.q.end(), y.begin());
  std::copy(s0.p.begin(), s0.p.end(), y.begin() + n);
  Vec k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m);
  vector_field(y, k1);

  const double tol = options.tol;
  const double span = std::fabs(t_end - t0);
  double t = t0;
  double h = initial_step(y, k1, tol, span, dir);
  double facold = 1e-4;
  bool last_rejected = false;

  while ((t_end - t) * dir > 0.0) {
    if (traj.stats.accepted + traj.stats.rejected >= options.max_steps) {
      throw ConvergenceError("integrate: step budget exhausted");
    }
    if (h < options.min_step) {
      const Guard g = check_guard(y, options.gap_tol);
      std::ostringstream msg;
      msg << "near-collision between peakons " << g.pair << " and " << g.pair + 1 << " at t=" << t;
      throw NearCollisionError(g.pair, t, msg.str());
    }
    bool final_step = false;
    if ((t + dir * h - t_end) * dir >= 0.0) {
      h = std::fabs(t_end - t);
      final_step = true;
    }
    const double hs = dir * h;

    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
    vector_field(tmp, k2);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    vector_field(tmp, k3);
    for (std::size_t i = 0; i < m; ++i) {
      tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    }
    vector_field(tmp, k4);
    for (std::size_t i = 0; i < m; ++i) {
      tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    }
    vector_field(tmp, k5);
    for (std::size_t i = 0; i < m; ++i) {
      tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    vector_field(tmp, k6);
    for (std::size_t i = 0; i < m; ++i) {
      y1[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }

    if (!check_guard(y1, options.gap_tol).ok) {
      ++traj.stats.guard_rejections;
      ++traj.stats.rejected;
      h *= 0.5;
      last_rejected = true;
      continue;
    }

    vector_field(y1, k7);
    for (std::size_t i = 0; i < m; ++i) {
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    const double e = error_norm(y, y1, err, tol);
    const double fac11 = std::pow(e, kExpo);

    if (!(e <= 1.0)) {
      ++traj.stats.rejected;
      h /= std::min(kMaxShrink, fac11 / kSafety);
      last_rejected = true;
      continue;
    }

    ++traj.stats.accepted;
    const double t_new = final_step ? t_end : t + hs;
    bool pending = next < times.size() && (times[next] - t_new) * dir <= 0.0;
    if (pending) {
      Vec rc5(m);
      for (std::size_t i = 0; i < m; ++i) {
        rc5[i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      Vec ys(m);
      while (next < times.size() && (times[next] - t_new) * dir <= 0.0) {
        const double ts = times[next];
        if (ts == t_new) {
          ys = y1;
        } else {
          const double th = (ts - t) / hs;
          const double th1 = 1.0 - th;
          for (std::size_t i = 0; i < m; ++i) {
            const double rc2 = y1[i] - y[i];
            const double rc3 = hs * k1[i] - rc2;
            const double rc4 = rc2 - hs * k7[i] - rc3;
            ys[i] = y[i] + th * (rc2 + th1 * (rc3 + th * (rc4 + th1 * rc5[i])));
          }
        }
        record(to_state(ts, ys));
        ++next;
      }
    }

    y.swap(y1);
    k1.swap(k7);
    t = t_new;

    double fac = fac11 / std::pow(facold, kBeta);
    fac = std::max(1.0 / kMaxGrowth, std::min(kMaxShrink, fac / kSafety));
    double h_new = h / fac;
    if (last_rejected) h_new = std::min(h_new, h);
    facold = std::max(e, 1e-4);
    last_rejected = false;
    h = std::min(h_new, span);
  }
  return traj;
}

PeakonState advance(const PeakonState& s0, double t_end, double tol) {
  IntegratorOptions opts;
  opts.tol = tol;
  opts.samples = 2;
  return integrate(s0, t_end, opts).back();
}

}  // namespace peakon
