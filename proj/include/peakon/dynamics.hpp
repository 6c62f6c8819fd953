#pragma once

// The multipeakon Hamiltonian system
//
//   q_i' = sum_j p_j exp(-|q_i - q_j|),
//   p_i' = sum_j p_i p_j sgn(q_i - q_j) exp(-|q_i - q_j|),
//
// and its adaptive integration.

#include <cstddef>
#include <optional>
#include <vector>

#include "peakon/core.hpp"

namespace peakon {

inline constexpr double kGapTol = 1e-9;
inline constexpr double kMinStep = 1e-12;
inline constexpr double kDefaultTol = 1e-10;

struct PeakonState {
  double t = 0.0;
  std::vector<double> p;  // momenta, all > 0
  std::vector<double> q;  // positions, strictly increasing

  std::size_t size() const noexcept { return p.size(); }

  /// Throws StateError unless p > 0 and q strictly increasing.
  void validate() const;

  /// The mirror (p_i, q_i) -> (p_{N+1-i}, -q_{N+1-i}), t -> -t.
  PeakonState mirrored() const;

  friend bool operator==(const PeakonState&, const PeakonState&) = default;
};

struct Derivative {
  std::vector<double> dq;
  std::vector<double> dp;
};

Derivative rhs(const PeakonState& s);

/// H = 1/2 sum_ij p_i p_j exp(-|q_i - q_j|) = E(u) / 4.
double hamiltonian(const PeakonState& s);

PeakedField field(const PeakonState& s);

struct IntegratorOptions {
  double tol = kDefaultTol;
  double gap_tol = kGapTol;
  double min_step = kMinStep;
  /// Uniformly spaced samples including both ends (>= 2). Ignored when
  /// sample_times is set.
  std::size_t samples = 2;
  /// Explicit sample times, monotone in the direction of integration.
  std::optional<std::vector<double>> sample_times;
  bool record_spectrum = false;
  std::size_t max_steps = 50'000'000;
};

struct Observables {
  double energy;
  double moment_f;
  double sum_p;
  std::vector<double> spectrum;  // empty unless requested
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t guard_rejections = 0;
};

struct Trajectory {
  std::vector<PeakonState> states;
  std::vector<Observables> observables;
  IntegrationStats stats;

  std::size_t size() const noexcept { return states.size(); }
  const PeakonState& back() const { return states.back(); }
};

/// Dormand-Prince 5(4) with PI step control and dense output. Integrates
/// backward when t_end < s0.t. Steps that would shrink a gap below gap_tol
/// or make a momentum non-positive are rejected and halved; a step below
/// min_step throws NearCollisionError.
Trajectory integrate(const PeakonState& s0, double t_end, const IntegratorOptions& options = {});

/// Convenience: the state at t_end only.
PeakonState advance(const PeakonState& s0, double t_end, double tol = kDefaultTol);

}  // namespace peakon
