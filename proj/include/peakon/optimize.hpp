#pragma once

// Derivative-free minimisation.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace peakon {

struct NelderMeadOptions {
  double initial_scale = 0.1;    // edge length of the starting simplex
  double diameter_tol = 1e-8;    // stop when every vertex is this close to the best
  std::size_t max_iterations = 20000;
  int restarts = 1;              // re-seed the simplex at the optimum this many times
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Nelder-Mead with the standard coefficients (1, 2, 1/2, 1/2). Ties in the
/// vertex ordering are broken by vertex index, so runs are deterministic.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

}  // namespace peakon
