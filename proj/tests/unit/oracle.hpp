#pragma once

// Brute-force references that share no code with the library: direct kernel
// sums and composite Simpson quadrature on a fine grid.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

struct Kernel {
  std::vector<double> a;  // amplitudes
  std::vector<double> r;  // nodes
};

inline Kernel combine(const Kernel& u, const Kernel& v, double sv = 1.0) {
  Kernel w = u;
  for (std::size_t i = 0; i < v.a.size(); ++i) {
    w.a.push_back(sv * v.a[i]);
    w.r.push_back(v.r[i]);
  }
  return w;
}

inline double value(const Kernel& k, double x) {
  double s = 0.0;
  for (std::size_t i = 0; i < k.a.size(); ++i) s += k.a[i] * std::exp(-std::fabs(x - k.r[i]));
  return s;
}

// Derivative on an interval free of nodes; `mid` decides every sign.
inline double slope(const Kernel& k, double x, double mid) {
  double s = 0.0;
  for (std::size_t i = 0; i < k.a.size(); ++i) {
    const double sg = mid > k.r[i] ? 1.0 : -1.0;
    s -= sg * k.a[i] * std::exp(-std::fabs(x - k.r[i]));
  }
  return s;
}

class Kahan {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// Composite Simpson of f(x, mid) over [lo, hi] split at `breaks`, each piece
// with an even number of panels of width <= step.
template <class F>
double simpson(double lo, double hi, std::vector<double> breaks, F f, double step = 1e-4) {
  breaks.push_back(lo);
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  Kahan total;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double a = std::max(lo, breaks[b]);
    const double c = std::min(hi, breaks[b + 1]);
    if (!(c > a)) continue;
    long n = static_cast<long>(std::ceil((c - a) / step));
    if (n % 2) ++n;
    const double h = (c - a) / static_cast<double>(n);
    const double mid = 0.5 * (a + c);
    Kahan s;
    s.add(f(a, mid));
    s.add(f(c, mid));
    for (long i = 1; i < n; ++i) s.add((i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i), mid));
    total.add(s.value() * h / 3.0);
  }
  return total.value();
}

// Integral over [min node - window, max node + window] split at the nodes.
template <class F>
double over_field(const Kernel& k, F f, std::vector<double> extra = {}, double step = 1e-4,
                  double window = 60.0) {
  const auto [mn, mx] = std::minmax_element(k.r.begin(), k.r.end());
  std::vector<double> breaks = k.r;
  breaks.insert(breaks.end(), extra.begin(), extra.end());
  return simpson(*mn - window, *mx + window, breaks, f, step);
}

inline double energy(const Kernel& k) {
  return over_field(k, [&](double x, double m) {
    const double u = value(k, x), ux = slope(k, x, m);
    return u * u + ux * ux;
  });
}

inline double moment_f(const Kernel& k) {
  return over_field(k, [&](double x, double m) {
    const double u = value(k, x), ux = slope(k, x, m);
    return u * u * u + u * ux * ux;
  });
}

inline double inner(const Kernel& u, const Kernel& v) {
  const Kernel all = combine(u, v);
  return over_field(all, [&](double x, double m) {
    return value(u, x) * value(v, x) + slope(u, x, m) * slope(v, x, m);
  });
}

// Argmax of u over [lo, hi] on a grid of spacing `step`.
inline double grid_argmax(const Kernel& k, double lo, double hi, double step = 1e-4) {
  const long n = static_cast<long>(std::ceil((hi - lo) / step));
  double best = lo, bv = value(k, lo);
  for (long i = 1; i <= n; ++i) {
    const double x = std::min(hi, lo + step * static_cast<double>(i));
    const double v = value(k, x);
    if (v > bv) bv = v, best = x;
  }
  return best;
}

struct RandomFields {
  explicit RandomFields(std::uint64_t seed) : gen(seed) {}
  std::mt19937_64 gen;

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }

  Kernel positive(std::size_t max_n = 5, double spread = 10.0) {
    const std::size_t n = 1 + static_cast<std::size_t>(uniform(0.0, static_cast<double>(max_n) - 1e-9));
    Kernel k;
    for (std::size_t i = 0; i < n; ++i) {
      k.a.push_back(uniform(0.2, 3.0));
      k.r.push_back(uniform(-spread, spread));
    }
    std::sort(k.r.begin(), k.r.end());
    return k;
  }

  Kernel signed_field(std::size_t max_n = 5, double spread = 10.0) {
    Kernel k = positive(max_n, spread);
    for (double& a : k.a) a *= uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    return k;
  }
};

}  // namespace oracle
