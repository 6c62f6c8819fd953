#include "peakon/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "peakon/errors.hpp"

namespace peakon {

namespace {

using Point = std::vector<double>;

struct Simplex {
  std::vector<Point> v;
  std::vector<double> f;
};

Simplex seed(const Objective& f, const Point& x0, double scale) {
  Simplex s;
  s.v.push_back(x0);
  for (std::size_t i = 0; i < x0.size(); ++i) {
    Point p = x0;
    p[i] += scale;
    s.v.push_back(std::move(p));
  }
  for (const Point& p : s.v) s.f.push_back(f(p));
  return s;
}

void order(Simplex& s) {
  std::vector<std::size_t> idx(s.v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return s.f[a] < s.f[b];
  });
  Simplex r;
  for (std::size_t i : idx) {
    r.v.push_back(s.v[i]);
    r.f.push_back(s.f[i]);
  }
  s = std::move(r);
}

double diameter(const Simplex& s) {
  double d = 0.0;
  for (std::size_t k = 1; k < s.v.size(); ++k) {
    for (std::size_t i = 0; i < s.v[k].size(); ++i) {
      d = std::max(d, std::fabs(s.v[k][i] - s.v[0][i]));
    }
  }
  return d;
}

Point affine(const Point& c, const Point& p, double t) {
  Point r(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) r[i] = c[i] + t * (p[i] - c[i]);
  return r;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& options) {
  if (x0.empty()) return {x0, f(x0), 0, true};
  for (double x : x0) {
    if (!std::isfinite(x)) throw DomainError("nelder_mead: non-finite start");
  }
  const std::size_t n = x0.size();
  NelderMeadResult result{x0, 0.0, 0, false};

  for (int round = 0; round <= options.restarts; ++round) {
    Simplex s = seed(f, result.x, options.initial_scale);
    bool converged = false;
    while (result.iterations < options.max_iterations) {
      order(s);
      if (diameter(s) <= options.diameter_tol) {
        converged = true;
        break;
      }
      ++result.iterations;
      Point centroid(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) centroid[i] += s.v[k][i] / static_cast<double>(n);
      }
      const Point xr = affine(centroid, s.v[n], -1.0);
      const double fr = f(xr);
      if (fr < s.f[0]) {
        const Point xe = affine(centroid, s.v[n], -2.0);
        const double fe = f(xe);
        if (fe < fr) {
          s.v[n] = xe;
          s.f[n] = fe;
        } else {
          s.v[n] = xr;
          s.f[n] = fr;
        }
        continue;
      }
      if (fr < s.f[n - 1]) {
        s.v[n] = xr;
        s.f[n] = fr;
        continue;
      }
      const bool outside = fr < s.f[n];
      const Point xc = outside ? affine(centroid, xr, 0.5) : affine(centroid, s.v[n], 0.5);
      const double fc = f(xc);
      if (fc < (outside ? fr : s.f[n])) {
        s.v[n] = xc;
        s.f[n] = fc;
        continue;
      }
      for (std::size_t k = 1; k <= n; ++k) {
        s.v[k] = affine(s.v[0], s.v[k], 0.5);
        s.f[k] = f(s.v[k]);
      }
    }
    order(s);
    result.x = s.v[0];
    result.value = s.f[0];
    result.converged = converged;
    if (!converged) break;
  }
  return result;
}

}  // namespace peakon
