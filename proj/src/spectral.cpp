#include "peakon/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "peakon/errors.hpp"
#include "peakon/numeric.hpp"

namespace peakon {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffTol = 1e-14;
constexpr double kSymTol = 1e-12;
constexpr double kCondTol = 1e-13;

double off_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.n; ++i) {
    for (std::size_t j = 0; j < a.n; ++j) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

DenseMatrix kernel_matrix(const PeakonState& s) {
  const std::size_t n = s.size();
  DenseMatrix k(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k(i, j) = std::exp(-0.5 * std::fabs(s.q[i] - s.q[j]));
  }
  return k;
}

}  // namespace

DenseMatrix DenseMatrix::identity(std::size_t size) {
  DenseMatrix m(size);
  for (std::size_t i = 0; i < size; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& other) const {
  DenseMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      CompensatedSum s;
      for (std::size_t k = 0; k < n; ++k) s += (*this)(i, k) * other(k, j);
      r(i, j) = s.value();
    }
  }
  return r;
}

std::vector<double> DenseMatrix::operator*(const std::vector<double>& v) const {
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum s;
    for (std::size_t k = 0; k < n; ++k) s += (*this)(i, k) * v[k];
    r[i] = s.value();
  }
  return r;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) r(j, i) = (*this)(i, j);
  }
  return r;
}

double DenseMatrix::frobenius() const {
  double s = 0.0;
  for (double x : data) s += x * x;
  return std::sqrt(s);
}

EigenDecomposition symmetric_eigen(const DenseMatrix& m) {
  const std::size_t n = m.n;
  if (m.data.size() != n * n) throw DomainError("symmetric_eigen: malformed matrix");
  const double norm = m.frobenius();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (!std::isfinite(m(i, j)) || !std::isfinite(m(j, i))) {
        throw DomainError("symmetric_eigen: non-finite entry");
      }
      if (std::fabs(m(i, j) - m(j, i)) > kSymTol * std::max(1.0, norm)) {
        throw DomainError("symmetric_eigen: matrix is not symmetric");
      }
    }
  }

  DenseMatrix a = m;
  // Symmetrize exactly so rotations act on a symmetric matrix.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i) = 0.5 * (m(i, j) + m(j, i));
  }
  DenseMatrix v = DenseMatrix::identity(n);
  int sweeps = 0;
  while (off_norm(a) >= kOffTol * norm && norm > 0.0) {
    if (sweeps == kMaxSweeps) throw ConvergenceError("symmetric_eigen: no convergence in 100 sweeps");
    ++sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p);
            const double arq = a(r, q);
            a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
            a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
          }
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  EigenDecomposition out{std::vector<double>(n), DenseMatrix(n), sweeps};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

DenseMatrix peakon_matrix(const PeakonState& s) {
  s.validate();
  DenseMatrix a = kernel_matrix(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) a(i, j) *= s.p[j];
  }
  return a;
}

Spectrum spectrum(const PeakonState& s) {
  s.validate();
  const std::size_t n = s.size();
  if (n == 0) return {};
  const EigenDecomposition lam = symmetric_eigen(kernel_matrix(s));
  const double top = lam.values.back();
  if (!(lam.values.front() >= kCondTol * top)) {
    throw ConditioningError("spectrum: kernel matrix is numerically singular");
  }
  // B = U sqrt(Lambda) U^T.
  DenseMatrix b(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      CompensatedSum acc;
      for (std::size_t k = 0; k < n; ++k) {
        acc += lam.vectors(i, k) * std::sqrt(lam.values[k]) * lam.vectors(j, k);
      }
      b(i, j) = acc.value();
    }
  }
  DenseMatrix bd = b;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) bd(i, j) *= s.p[j];
  }
  DenseMatrix bdb = bd * b;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) bdb(i, j) = bdb(j, i) = 0.5 * (bdb(i, j) + bdb(j, i));
  }
  const EigenDecomposition sym = symmetric_eigen(bdb);
  Spectrum out{sym.values, b * sym.vectors};
  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += out.vectors(r, k) * out.vectors(r, k);
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) /= norm;
  }
  return out;
}

double eigen_residual(const PeakonState& s, double lambda, const std::vector<double>& v) {
  if (v.size() != s.size()) throw DomainError("eigen_residual: vector length differs from N");
  const std::vector<double> av = peakon_matrix(s) * v;
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r = std::max(r, std::fabs(av[i] - lambda * v[i]));
  return r;
}

}  // namespace peakon
