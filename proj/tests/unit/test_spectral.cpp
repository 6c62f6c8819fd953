#include <cmath>
#include <random>

#include "doctest.h"
#include "peakon/dynamics.hpp"
#include "peakon/errors.hpp"
#include "peakon/optimize.hpp"
#include "peakon/spectral.hpp"

using namespace peakon;

namespace {

std::vector<double> quadratic_roots(double p1, double p2, double d) {
  const double b = p1 + p2, c = p1 * p2 * (1.0 - std::exp(-d));
  const double disc = std::sqrt(b * b - 4.0 * c);
  const double big = 0.5 * (b + disc);
  return {c / big, big};
}

std::vector<double> column(const DenseMatrix& m, std::size_t k) {
  std::vector<double> v(m.n);
  for (std::size_t r = 0; r < m.n; ++r) v[r] = m(r, k);
  return v;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("Jacobi on small matrices") {
  const EigenDecomposition id = symmetric_eigen(DenseMatrix::identity(4));
  for (double v : id.values) CHECK(v == 1.0);

  DenseMatrix m(2);
  m(0, 0) = m(1, 1) = 3.0;
  m(0, 1) = m(1, 0) = 0.5;
  const EigenDecomposition e = symmetric_eigen(m);
  CHECK(e.values[0] == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(e.values[1] == doctest::Approx(3.5).epsilon(1e-15));

  DenseMatrix bad(2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(symmetric_eigen(bad), DomainError);
}

TEST_CASE("Jacobi reconstructs random symmetric matrices") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {3u, 6u, 12u}) {
    DenseMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(gen);
    }
    const EigenDecomposition e = symmetric_eigen(a);
    for (std::size_t k = 1; k < n; ++k) CHECK(e.values[k] >= e.values[k - 1]);
    DenseMatrix d(n);
    for (std::size_t k = 0; k < n; ++k) d(k, k) = e.values[k];
    const DenseMatrix back = e.vectors * d * e.vectors.transposed();
    const DenseMatrix vtv = e.vectors.transposed() * e.vectors;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(std::fabs(back(i, j) - a(i, j)) <= 1e-13);
        CHECK(std::fabs(vtv(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-13);
      }
    }
  }
}

TEST_CASE("peakon matrix entries") {
  const DenseMatrix one = peakon_matrix(PeakonState{0.0, {1.7}, {0.0}});
  CHECK(one.n == 1);
  CHECK(one(0, 0) == 1.7);
  const double d = 2.2;
  const DenseMatrix a = peakon_matrix(PeakonState{0.0, {1.0, 2.0}, {0.0, d}});
  CHECK(a(0, 0) == 1.0);
  CHECK(a(1, 1) == 2.0);
  CHECK(a(0, 1) == doctest::Approx(2.0 * std::exp(-d / 2)));
  CHECK(a(1, 0) == doctest::Approx(std::exp(-d / 2)));
}

TEST_CASE("spectrum examples") {
  CHECK(spectrum(PeakonState{0.0, {2.5}, {3.0}}).lambda[0] == doctest::Approx(2.5));
  const Spectrum far = spectrum(PeakonState{0.0, {3.0, 1.0, 2.0}, {0.0, 200.0, 400.0}});
  CHECK(far.lambda[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(far.lambda[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(far.lambda[2] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("two-peakon spectrum matches the closed-form quadratic") {
  for (double d : {0.1, 1.0, 20.0}) {
    for (auto [p1, p2] : {std::pair{2.0, 1.0}, std::pair{1.0, 1.0}, std::pair{0.3, 4.0}}) {
      const Spectrum s = spectrum(PeakonState{0.0, {p1, p2}, {0.0, d}});
      const auto r = quadratic_roots(p1, p2, d);
      CHECK(std::fabs(s.lambda[0] - r[0]) <= 1e-12 * r[1]);
      CHECK(std::fabs(s.lambda[1] - r[1]) <= 1e-12 * r[1]);
    }
  }
}

TEST_CASE("eigen residuals") {
  CHECK(eigen_residual(PeakonState{0.0, {2.0}, {0.0}}, 2.0, {1.0}) == 0.0);
  const PeakonState s{0.0, {3.0, 2.0, 1.0, 0.5}, {-4.0, -1.0, 0.5, 6.0}};
  const Spectrum sp = spectrum(s);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto v = column(sp.vectors, k);
    CHECK(eigen_residual(s, sp.lambda[k], v) <= 1e-9);
    const double off = 0.01;
    CHECK(eigen_residual(s, sp.lambda[k] + off, v) >= 0.5 * off);
  }
}

TEST_CASE("positivity and simplicity on random states") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.1, 3.0), g(0.05, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    PeakonState s;
    double q = 0.0;
    for (int i = 0; i < 6; ++i) {
      s.p.push_back(u(gen));
      s.q.push_back(q);
      q += g(gen);
    }
    const Spectrum sp = spectrum(s);
    CHECK(sp.lambda[0] > 0.0);
    for (std::size_t k = 1; k < sp.lambda.size(); ++k) CHECK(sp.lambda[k] > sp.lambda[k - 1]);
  }
}

TEST_CASE("isospectral flow") {
  IntegratorOptions opt;
  opt.samples = 50;
  opt.record_spectrum = true;
  const Trajectory tr = integrate(PeakonState{0.0, {1.0, 3.0, 0.5, 2.0}, {-8.0, -2.0, 1.0, 9.0}}, 40.0, opt);
  for (std::size_t i = 0; i < 4; ++i) {
    for (const auto& o : tr.observables) {
      CHECK(std::fabs(o.spectrum[i] / tr.observables.front().spectrum[i] - 1.0) <= 1e-7);
    }
  }
}

TEST_CASE("near-coincident nodes are ill-conditioned") {
  PeakonState s;
  for (int i = 0; i < 5; ++i) {
    s.p.push_back(1.0);
    s.q.push_back(1.01e-12 * i);
  }
  CHECK_THROWS_AS(spectrum(s), ConditioningError);
}

}

TEST_SUITE("optimize") {

TEST_CASE("Nelder-Mead on Rosenbrock") {
  NelderMeadOptions opt;
  opt.initial_scale = 0.5;
  opt.diameter_tol = 1e-10;
  const auto r = nelder_mead(
      [](std::span<const double> x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
      },
      {-1.2, 1.0}, opt);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Nelder-Mead on a kinked objective is deterministic") {
  auto f = [](std::span<const double> x) { return std::fabs(x[0] - 0.3) + 2.0 * std::fabs(x[1] + 1.0) + x[2] * x[2]; };
  const auto a = nelder_mead(f, {0.0, 0.0, 0.5});
  const auto b = nelder_mead(f, {0.0, 0.0, 0.5});
  CHECK(a.x == b.x);
  CHECK(a.value == b.value);
  CHECK(a.x[0] == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(a.x[1] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(std::fabs(a.x[2]) <= 1e-4);
}

}
