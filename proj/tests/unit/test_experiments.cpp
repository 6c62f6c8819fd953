#include <cmath>
#include <string>

#include "doctest.h"
#include "oracle.hpp"
#include "peakon/errors.hpp"
#include "peakon/experiments.hpp"

using namespace peakon;

namespace {

PeakedField to_field(const oracle::Kernel& k) { return PeakedField(k.a, k.r); }

oracle::Kernel to_kernel(const PeakedField& u) {
  return {std::vector<double>(u.amps().begin(), u.amps().end()),
          std::vector<double>(u.nodes().begin(), u.nodes().end())};
}

// D(X)^2 from direct kernel sums.
double gram_objective(const oracle::Kernel& u, const std::vector<double>& c, const std::vector<double>& x) {
  double e = 0.0;
  for (std::size_t i = 0; i < u.a.size(); ++i) {
    for (std::size_t j = 0; j < u.a.size(); ++j) e += 2.0 * u.a[i] * u.a[j] * std::exp(-std::fabs(u.r[i] - u.r[j]));
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) e += 2.0 * c[i] * c[j] * std::exp(-std::fabs(x[i] - x[j]));
    e -= 4.0 * c[i] * oracle::value(u, x[i]);
  }
  return e;
}

// Nested grid refinement of D over two shifts.
double grid_min_distance(const oracle::Kernel& u, const std::vector<double>& c, std::vector<double> x) {
  double best = gram_objective(u, c, x);
  for (double step = 0.02; step >= 1e-10; step /= 5.0) {
    std::vector<double> centre = x;
    for (int i = -10; i <= 10; ++i) {
      for (int j = -10; j <= 10; ++j) {
        const std::vector<double> y = {centre[0] + i * step, centre[1] + j * step};
        const double v = gram_objective(u, c, y);
        if (v < best) best = v, x = y;
      }
    }
  }
  return std::sqrt(std::max(best, 0.0));
}

TrainSpec perturbed_train(double eps, std::uint64_t seed, double L = 50.0) {
  return calibrated_train({1.0, 2.0}, L, eps, seed);
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("single-peakon identities on random positive fields") {
  oracle::RandomFields rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const PeakedField u = to_field(rng.positive(6));
    const double c = rng.uniform(0.1, 3.0), xi = rng.uniform(-15.0, 15.0);
    CHECK(std::fabs(peak_identity_residual(u, c, xi)) <= 1e-11);
    CHECK(peak_inequality_margin(u) >= -1e-12);
    const std::vector<double> cs = {rng.uniform(0.1, 1.0), rng.uniform(1.1, 2.0)};
    const std::vector<double> zs = {rng.uniform(-10.0, 0.0), rng.uniform(0.0, 10.0)};
    CHECK(std::fabs(train_identity_residual(u, cs, zs)) <= 1e-11);
  }
  CHECK(max_value(PeakedField({1.0, 2.0}, {0.0, 30.0})) == doctest::Approx(2.0 + std::exp(-30.0)));
}

TEST_CASE("locate_peaks examples") {
  const std::vector<double> c = {1.0, 2.0, 3.0}, z = {0.0, 40.0, 80.0};
  const std::vector<double> cuts = {20.0, 60.0};
  CHECK(locate_peaks(train(c, z), cuts) == z);
  CHECK(locate_peaks(PeakedField::peakon(1.0, 3.5), std::vector<double>{}) == std::vector<double>{3.5});
  CHECK_THROWS_AS(locate_peaks(train(c, z), std::vector<double>{60.0, 20.0}), DomainError);
}

TEST_CASE("locate_peaks matches a grid argmax on every interval") {
  oracle::RandomFields rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    const oracle::Kernel k = rng.positive(6, 8.0);
    const std::vector<double> cuts = {rng.uniform(-6.0, -1.0), rng.uniform(1.0, 6.0)};
    const auto x = locate_peaks(to_field(k), cuts);
    const std::vector<double> lo = {-20.0, cuts[0], cuts[1]}, hi = {cuts[0], cuts[1], 20.0};
    for (std::size_t i = 0; i < 3; ++i) {
      const double g = oracle::grid_argmax(k, lo[i], hi[i]);
      CHECK(std::fabs(x[i] - g) <= 1e-4);
      CHECK(oracle::value(k, x[i]) >= oracle::value(k, g));
    }
  }
}

TEST_CASE("modulation residual closed form agrees with quadrature") {
  const TrainSpec spec = perturbed_train(0.1, 4, 12.0);
  const PeakedField u = initial_field(spec);
  const std::vector<double> x = {spec.shifts[0] + 0.05, spec.shifts[1] - 0.02};
  const auto y = modulation_residual(u, spec.speeds, x);
  const oracle::Kernel diff = oracle::combine(to_kernel(u), {spec.speeds, x}, -1.0);
  for (std::size_t i = 0; i < 2; ++i) {
    const double ref = oracle::over_field(
        diff,
        [&](double s, double m) {
          const double sg = m > x[i] ? 1.0 : -1.0;
          return oracle::value(diff, s) * (-spec.speeds[i] * sg * std::exp(-std::fabs(s - x[i])));
        },
        {}, 5e-5);
    CHECK(std::fabs(y[i] - ref) <= 1e-9);
  }
}

TEST_CASE("modulation examples") {
  const std::vector<double> c = {1.0, 2.0}, z = {0.0, 30.0};
  const ModulationResult exact = modulate(train(c, z), c, z);
  CHECK(exact.x == z);
  CHECK(exact.iterations == 0);
  CHECK(exact.residual == 0.0);

  // Micro peakons symmetric about z_2 leave x~_2 in place.
  const PeakedField sym = train(c, z) + PeakedField({0.01, 0.01}, {27.0, 33.0});
  const std::vector<double> guess = {0.1, 30.2};
  const ModulationResult m = modulate(sym, c, guess);
  CHECK(std::fabs(m.x[1] - 30.0) <= 1e-12);
  CHECK(m.residual <= 1e-10);
}

TEST_CASE("modulation of perturbed trains") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const TrainSpec spec = perturbed_train(0.05, seed);
    const PeakedField u = initial_field(spec);
    const ModulationResult m = modulate(u, spec.speeds, spec.shifts);
    const auto y = modulation_residual(u, spec.speeds, m.x);
    for (double v : y) CHECK(std::fabs(v) <= 1e-10);
    const auto peaks = locate_peaks(u, std::vector<double>{0.5 * (spec.shifts[0] + spec.shifts[1])});
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::fabs(m.x[i] - peaks[i]) <= spec.spacing / 12.0);
  }
}

TEST_CASE("min shift distance examples") {
  const std::vector<double> c = {1.0, 2.0}, z = {0.0, 20.0};
  const ShiftDistance exact = min_shift_distance(train(c, z), c, z);
  CHECK(exact.d <= 1e-7);
  CHECK(exact.x[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-7));
  CHECK(exact.x[1] == doctest::Approx(20.0).epsilon(1e-7));

  const std::vector<double> moved = {0.0, 20.3};
  const ShiftDistance s = min_shift_distance(train(c, moved), c, z);
  CHECK(s.d <= 1e-7);
  CHECK(s.x[1] == doctest::Approx(20.3).epsilon(1e-8));
  CHECK(s.ordered);
}

TEST_CASE("min shift distance against a nested grid search") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const TrainSpec spec = perturbed_train(0.2, seed);
    const PeakedField u = initial_field(spec);
    const ShiftDistance s = min_shift_distance(u, spec.speeds, spec.shifts);
    const oracle::Kernel k = to_kernel(u);
    CHECK(std::fabs(s.d - grid_min_distance(k, spec.speeds, spec.shifts)) <= 1e-5);
    const auto peaks = locate_peaks(u, std::vector<double>{0.5 * (spec.shifts[0] + spec.shifts[1])});
    CHECK(s.d <= h1_dist(u, train(spec.speeds, peaks)) + 1e-12);
    const double obj = shift_objective(u, spec.speeds, s.x);
    const double d2 = s.d * s.d;
    CHECK(std::fabs(obj - d2) <= 1e-10 * std::max(d2, energy(u) * 1e-6));
  }
}

TEST_CASE("train spec validation lists every violation") {
  TrainSpec bad;
  bad.speeds = {2.0, 1.0};
  bad.shifts = {0.0, 1.0};
  bad.spacing = 50.0;
  bad.epsilon = -1.0;
  try {
    validate(bad);
    FAIL("expected a constraint error");
  } catch (const ConstraintError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("increasing") != std::string::npos);
    CHECK(msg.find("L apart") != std::string::npos);
    CHECK(msg.find("epsilon") != std::string::npos);
  }
}

TEST_CASE("random perturbation directions") {
  const std::vector<double> c = {1.0, 2.0, 3.0};
  const auto z = equally_spaced(3, 30.0);
  CHECK(z == std::vector<double>{0.0, 30.0, 60.0});
  const Perturbation a = random_direction(c, z, 30.0, 9, 4);
  const Perturbation b = random_direction(c, z, 30.0, 9, 4);
  const Perturbation other = random_direction(c, z, 30.0, 10, 4);
  CHECK(a == b);
  CHECK(!(a == other));
  REQUIRE(a.micro.size() == 4);
  for (const MicroPeakon& m : a.micro) {
    CHECK(m.amp >= 0.5);
    CHECK(m.amp <= 1.0);
    CHECK(m.position >= -15.0 - 1.0);
    CHECK(m.position <= 75.0 + 1.0);
    for (double zz : z) CHECK(std::fabs(m.position - zz) >= 1.0 - 1e-12);
  }
  for (double v : a.amp_jitter) CHECK(std::fabs(v) <= 1.0);
}

TEST_CASE("calibrated trains start at distance eps squared") {
  for (double eps : {0.04, 0.01, 0.0025}) {
    const TrainSpec spec = perturbed_train(eps, 1);
    const PeakedField u = initial_field(spec);
    CHECK(u.positive());
    const ShiftDistance s = min_shift_distance(u, spec.speeds, spec.shifts);
    CHECK(std::fabs(s.d / (eps * eps) - 1.0) <= 1e-6);
    CHECK_NOTHROW(initial_state(spec).validate());
  }
}

TEST_CASE("short stability run") {
  StabilityOptions opt;
  opt.t_end = 30.0;
  opt.samples = 16;
  const StabilityReport r = run_stability(perturbed_train(0.05, 2), opt);
  CHECK(r.samples.size() == 16);
  CHECK(r.scale == 4.0);
  CHECK(r.summary.ok());
  CHECK(r.summary.min_gap > 25.0);
  CHECK(r.summary.sup_d >= r.samples.front().d);
  for (const auto& s : r.samples) {
    CHECK(s.tracked_distance <= 10.0 * s.d + 2.0 * std::exp(-50.0 / 8.0));
    for (double m : s.localized_margin) CHECK(m >= 0.0);
    CHECK(s.weighted.size() == 1);
  }
}

TEST_CASE("sweep runs return in input order for any job count") {
  StabilityOptions opt;
  opt.t_end = 10.0;
  opt.samples = 6;
  const std::vector<TrainSpec> specs = {perturbed_train(0.04, 1), perturbed_train(0.01, 1)};
  const SweepReport a = run_stability_sweep(specs, opt, 1);
  const SweepReport b = run_stability_sweep(specs, opt, 4);
  REQUIRE(a.runs.size() == 2);
  CHECK(a.runs[0].spec == specs[0]);
  CHECK(a.runs[1].spec == specs[1]);
  CHECK(a.ratio == b.ratio);
  CHECK(a.runs[1].summary.sup_d == b.runs[1].summary.sup_d);
}

TEST_CASE("monotonicity preconditions") {
  const TrainSpec spec = perturbed_train(0.01, 1, 400.0);
  CHECK_THROWS_AS(run_monotonicity(spec, 2.0, 10.0), ConstraintError);
  CHECK_THROWS_AS(run_monotonicity(spec, 25.0, 10.0), ConstraintError);
  const MonotonicityReport r = run_monotonicity(spec, 5.0, 20.0, 21);
  CHECK(r.ok);
  CHECK(r.envelope == doctest::Approx(std::exp(-0.25 * 400.0 / 40.0)));
}

TEST_CASE("energy ahead of a line between two peakons is almost non-increasing") {
  const PeakonState s0{0.0, {1.0, 2.0}, {0.0, 100.0}};
  const auto I = reference_line_energy(s0, 50.0, 1.5, 5.0, 60.0, 61);
  double max_inc = 0.0;
  for (double v : I) max_inc = std::max(max_inc, v - I.front());
  CHECK(max_inc <= 1e-3);
  const auto back = reference_line_energy(s0, 50.0, 1.5, 5.0, -20.0, 21);
  CHECK(back.size() == 21);
}

TEST_CASE("asymptotic speeds") {
  const AsymptoticsReport r = run_asymptotics(PeakonState{0.0, {2.0, 1.0}, {-10.0, 10.0}}, 80.0);
  const double disc = std::sqrt(9.0 - 8.0 * (1.0 - std::exp(-20.0)));
  const double l1 = 0.5 * (3.0 - disc), l2 = 0.5 * (3.0 + disc);
  CHECK(r.lambda[0] == doctest::Approx(l1).epsilon(1e-12));
  CHECK(r.lambda[1] == doctest::Approx(l2).epsilon(1e-12));
  CHECK(std::fabs(r.forward.p[0] - l1) <= 1e-3);
  CHECK(std::fabs(r.forward.p[1] - l2) <= 1e-3);
  CHECK(std::fabs(r.backward.p[0] - l2) <= 1e-3);
  CHECK(std::fabs(r.backward.p[1] - l1) <= 1e-3);
  CHECK(r.forward.max_speed_error <= 1e-3);
  CHECK(r.backward.max_speed_error <= 1e-3);
}

TEST_CASE("weighted energy identity") {
  const PeakonState one{0.0, {1.0}, {0.0}};
  CHECK(check_energy_identity(one, WeightProfile::psi(4.0, 200.0), 1e-4).residual <= 1e-6);
  const PeakonState two{0.0, {2.0, 1.0}, {-1.0, 1.0}};
  CHECK(check_energy_identity(two, WeightProfile::constant(1.0), 1e-4).residual <= 1e-8);
  const WeightProfile g = WeightProfile::psi(4.0, 0.3);
  const IdentityCheck a = check_energy_identity(two, g, 1e-4);
  const IdentityCheck b = check_energy_identity(two, g, 5e-5);
  CHECK(a.residual <= 1e-5);
  const double ratio = a.residual / b.residual;
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
  CHECK(a.printed_residual > 0.1);
  CHECK_THROWS_AS(check_energy_identity(two, g, 1.0), ConstraintError);
}

TEST_CASE("energy flux against a quadrature oracle") {
  // int u u_x^2 g' + int u g' P with P = (1 - d^2)^{-1}(2u^2 + u_x^2) computed by convolution.
  const oracle::Kernel k{{2.0, 1.0}, {-1.0, 1.0}};
  const WeightProfile g = WeightProfile::psi(4.0, 0.3);
  auto source = [&](double y, double m) {
    const double v = oracle::value(k, y), vx = oracle::slope(k, y, m);
    return 2.0 * v * v + vx * vx;
  };
  auto P = [&](double x) {
    std::vector<double> br = k.r;
    br.push_back(x);
    return 0.5 * oracle::simpson(-60.0, 60.0, br,
                                 [&](double y, double m) { return std::exp(-std::fabs(x - y)) * source(y, m); },
                                 1e-3);
  };
  std::vector<double> br = k.r;
  for (double b : g.breakpoints()) br.push_back(b);
  const double ref = oracle::simpson(-40.0, 40.0, br, [&](double x, double m) {
    const double u = oracle::value(k, x), ux = oracle::slope(k, x, m);
    return u * ux * ux * g.derivative(x, 1) + u * g.derivative(x, 1) * P(x);
  }, 1e-2);
  CHECK(energy_flux(to_field(k), g) == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("peakon approximation of densities") {
  const double c = 1.5, w = 1e-3;
  const DensityApproximation narrow =
      approximate_from_density(MixtureDensity{{Box{-w, w, 2.0 * c / (2.0 * w)}}, {}}, 1);
  CHECK(narrow.state.p[0] == doctest::Approx(c).epsilon(1e-12));
  CHECK(std::fabs(narrow.state.q[0]) <= 1e-12);
  CHECK(narrow.distance <= 0.1);
  const DensityApproximation narrower =
      approximate_from_density(MixtureDensity{{Box{-w / 100, w / 100, 2.0 * c / (2.0 * w / 100)}}, {}}, 1);
  CHECK(narrower.distance < 0.2 * narrow.distance);

  const DensityApproximation two =
      approximate_from_density(MixtureDensity{{Box{-5.0, -3.0, 1.0}, Box{2.0, 6.0, 0.5}}, {}}, 2);
  CHECK(two.state.q[0] == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(two.state.q[1] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(two.state.p[0] == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(approximate_from_density(MixtureDensity{{Box{0.0, 1.0, 0.0}}, {}}, 3), DomainError);
  CHECK_THROWS_AS(approximate_from_density(GridDensity{0.0, 0.1, {1.0, -1.0}}, 1), DomainError);

  const MixtureDensity smooth{{}, {Gaussian{0.0, 1.0, 2.0}}};
  double prev = 1e9;
  for (std::size_t n : {4u, 16u, 64u}) {
    const DensityApproximation a = approximate_from_density(smooth, n);
    CHECK(a.mass == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(a.distance < prev);
    prev = a.distance;
  }
  const DensityApproximation g = approximate_from_density(GridDensity{-1.0, 0.5, {1.0, 2.0, 1.0}}, 2);
  CHECK(g.mass == doctest::Approx(2.0));
}

}
