#pragma once

// Peak tracking, modulation, shift distances and the experiment harnesses
// built on them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "peakon/core.hpp"
#include "peakon/dynamics.hpp"
#include "peakon/functionals.hpp"

namespace peakon {

// ---------------------------------------------------------------------------
// Exact identities for single peakons and trains.

/// max u over the line for a field with positive amplitudes (attained at a node).
double max_value(const PeakedField& u);

/// E(u) - 2c^2 - ||u - phi_c(. - xi)||^2 - 4c (u(xi) - c). Zero for every u, xi.
double peak_identity_residual(const PeakedField& u, double c, double xi);

/// M E(u) - 2/3 M^3 - F(u) with M = max u; nonnegative for positive u.
double peak_inequality_margin(const PeakedField& u);

/// E(u - R_Z) - (E(u) + E(R_Z) - 4 sum_i c_i u(z_i)). Zero for every u.
double train_identity_residual(const PeakedField& u, std::span<const double> speeds,
                       std::span<const double> shifts);

// ---------------------------------------------------------------------------
// Tracking.

/// Argmax of u on J_1 = (-inf, y_2], J_i = [y_i, y_{i+1}], J_N = [y_N, inf).
/// `cuts` holds y_2 < ... < y_N. Candidates are the nodes inside J_i and its
/// finite endpoints; ties go to the smallest candidate.
std::vector<double> locate_peaks(const PeakedField& u, std::span<const double> cuts);

struct ModulationResult {
  std::vector<double> x;
  int iterations = 0;
  double residual = 0.0;  // max_i |Y_i|
};

/// The orthogonality residuals Y_i = int (u - R_X) d/dx phi_{c_i}(. - x_i).
std::vector<double> modulation_residual(const PeakedField& u, std::span<const double> speeds,
                                        std::span<const double> x);

/// Solves Y(x) = 0 by damped Newton from `guess`. Throws ModulationFailure
/// when max |Y| > 1e-10 after 50 iterations or the shifts lose their order.
ModulationResult modulate(const PeakedField& u, std::span<const double> speeds,
                          std::span<const double> guess);

struct ShiftDistance {
  double d = 0.0;             // ||u - R_X|| at the minimiser
  double objective = 0.0;     // D(X)^2 from the Gram objective
  std::vector<double> x;
  bool ordered = true;        // X strictly increasing
  bool converged = true;
};

/// D(X)^2 = E(u) + 2 sum_ij c_i c_j exp(-|x_i - x_j|) - 4 sum_j c_j u(x_j).
double shift_objective(const PeakedField& u, std::span<const double> speeds,
                       std::span<const double> x);

/// Minimises D over X by Nelder-Mead from `init`.
ShiftDistance min_shift_distance(const PeakedField& u, std::span<const double> speeds,
                                 std::span<const double> init);

// ---------------------------------------------------------------------------
// Initial data.

struct MicroPeakon {
  double amp;       // before scaling, > 0
  double position;  // absolute
  friend bool operator==(const MicroPeakon&, const MicroPeakon&) = default;
};

/// Direction of a multipeakon perturbation, applied with magnitude `scale`:
/// amplitudes c_i (1 + s a_i), nodes z_i + s n_i, extra peakons of amplitude
/// s m_k.
struct Perturbation {
  std::vector<double> amp_jitter;
  std::vector<double> node_jitter;
  std::vector<MicroPeakon> micro;
  double scale = 0.0;
  friend bool operator==(const Perturbation&, const Perturbation&) = default;
};

struct TrainSpec {
  std::vector<double> speeds;  // 0 < c_1 < ... < c_N
  std::vector<double> shifts;  // z_j - z_{j-1} >= spacing
  double spacing = 0.0;
  double epsilon = 0.0;        // target: initial distance eps^2
  std::uint64_t seed = 0;
  Perturbation perturbation;
  friend bool operator==(const TrainSpec&, const TrainSpec&) = default;
};

/// Throws ConstraintError listing every violated hypothesis.
void validate(const TrainSpec& spec);

/// Shifts z_j = (j - 1) L.
std::vector<double> equally_spaced(std::size_t n, double spacing);

/// Random perturbation direction drawn from the seed (micro peakons placed
/// in [z_1 - L/2, z_N + L/2]), with zero scale.
Perturbation random_direction(std::span<const double> speeds, std::span<const double> shifts,
                              double spacing, std::uint64_t seed, std::size_t micro_count = 2);

PeakedField initial_field(const TrainSpec& spec);
PeakonState initial_state(const TrainSpec& spec);

/// A spec whose perturbation scale is tuned so the initial shift distance is
/// eps^2 (relative accuracy 1e-6).
TrainSpec calibrated_train(std::vector<double> speeds, double spacing, double epsilon,
                           std::uint64_t seed, std::size_t micro_count = 2);

// ---------------------------------------------------------------------------
// Stability of trains.

struct StabilitySample {
  double t = 0.0;
  double d = 0.0;                  // min-shift distance
  double tracked_distance = 0.0;   // ||u - R_x|| at the peaks x
  std::vector<double> peaks;       // x_i, argmax on J_i
  std::vector<double> modulated;   // x~_i (equals peaks when Newton failed)
  bool modulation_converged = true;
  std::vector<double> shifts;      // minimiser X
  std::vector<double> gaps;        // x_i - x_{i-1}
  std::vector<double> delta;       // c_i - M_i
  std::vector<double> weighted;    // I_{j,K}, j = 2..N
  std::vector<double> localized_margin;
  double delta_diagnostic = 0.0;   // sum delta_i^2 (c_i - delta_i / 3)
};

struct StabilitySummary {
  double sup_d = 0.0;
  double min_gap = 0.0;
  double max_delta_diagnostic = 0.0;
  double min_localized_margin = 0.0;
  double max_peak_offset = 0.0;    // max |x_i - x~_i|
  double max_tracked_excess = 0.0; // max of tracked - (10 d + N e^{-L/8})
  bool gap_ok = true;              // min gap > L/2
  bool localized_ok = true;
  bool offset_ok = true;           // max |x - x~| <= L/12
  bool tracked_ok = true;
  bool ok() const noexcept { return gap_ok && localized_ok && offset_ok && tracked_ok; }
};

struct StabilityOptions {
  double t_end = 200.0;
  double scale = 0.0;              // K; 0 means default_scale(L)
  std::size_t samples = 200;
  double tol = kDefaultTol;
  double localized_constant = 100.0;
};

struct StabilityReport {
  TrainSpec spec;
  double scale = 0.0;
  std::vector<StabilitySample> samples;
  StabilitySummary summary;
};

StabilityReport run_stability(const TrainSpec& spec, const StabilityOptions& options = {});

struct SweepReport {
  std::vector<StabilityReport> runs;
  std::vector<double> ratio;       // sup d / sqrt(eps) per run
  double sweep_constant = 0.0;     // max ratio
  double spread = 0.0;             // max ratio / min ratio
  bool diagnostic_decreasing = true;
};

/// Runs are independent; they execute on up to `jobs` threads and are
/// returned in input order.
SweepReport run_stability_sweep(const std::vector<TrainSpec>& specs,
                                const StabilityOptions& options, std::size_t jobs = 1);

// ---------------------------------------------------------------------------
// Almost monotonicity of I_{j,K}.

struct MonotonicityReport {
  std::vector<double> t;
  std::vector<std::vector<double>> weighted;  // [sample][j - 2]
  double max_increase = 0.0;
  double envelope = 0.0;          // exp(-sigma_0 L / (8K))
  double constant = 0.0;          // max_increase / envelope
  bool ok = true;                 // max_increase <= 100 envelope
};

/// Requires 4 <= K <= sqrt(L).
MonotonicityReport run_monotonicity(const TrainSpec& spec, double scale, double t_end,
                                    std::size_t samples = 200, double tol = kDefaultTol);

/// I(t) = int (u^2 + u_x^2) Psi_K(. - y0 - v t) for an arbitrary state and
/// reference line; t_end may be negative.
std::vector<double> reference_line_energy(const PeakonState& s0, double y0, double speed,
                                          double scale, double t_end, std::size_t samples,
                                          double tol = kDefaultTol);

// ---------------------------------------------------------------------------
// Asymptotics.

struct AsymptoticSide {
  double t = 0.0;
  std::vector<double> target;     // lambda ascending (t > 0) or descending (t < 0)
  std::vector<double> p;
  std::vector<double> speed;      // dq/dt
  double max_p_error = 0.0;
  double max_speed_error = 0.0;
  double distance = 0.0;          // inf_Q ||u - sum lambda_j exp(-|. - q_j|)||
};

struct AsymptoticsReport {
  std::vector<double> lambda;
  AsymptoticSide forward;
  AsymptoticSide backward;
};

AsymptoticsReport run_asymptotics(const PeakonState& s0, double horizon,
                                  double tol = kDefaultTol);

// ---------------------------------------------------------------------------
// Weighted energy identity.

struct IdentityCheck {
  double lhs = 0.0;               // central difference of int (u^2 + u_x^2) g
  double rhs = 0.0;               // energy_flux
  double residual = 0.0;          // |lhs - rhs|
  double printed_rhs = 0.0;       // printed_energy_flux
  double printed_residual = 0.0;  // |lhs - printed_rhs|
};

/// d/dt int (u^2 + u_x^2) g for a fixed weight g, obtained from
/// u_t + u u_x + d/dx (1 - d^2)^{-1}(u^2 + u_x^2 / 2) = 0:
///
///   int u u_x^2 g' + int u g' (1 - d^2)^{-1}(2u^2 + u_x^2).
double energy_flux(const PeakedField& u, const WeightProfile& g);

/// The alternative form
///
///   int (u^3 + 4 u u_x^2) g' - int u^3 g''' - int u g' (1 - d^2)^{-1}(2u^2 + u_x^2),
///
/// kept as a diagnostic; it does not equal the time derivative.
double printed_energy_flux(const PeakedField& u, const WeightProfile& g);

/// Requires h in [1e-5, 1e-2].
IdentityCheck check_energy_identity(const PeakonState& s, const WeightProfile& g, double h);

// ---------------------------------------------------------------------------
// Peakon approximation of a nonnegative momentum density.

struct Box {
  double lo;
  double hi;
  double height;
};

struct Gaussian {
  double mean;
  double sigma;
  double mass;
};

struct GridDensity {
  double x0;
  double dx;
  std::vector<double> values;  // samples at x0 + k dx, cell-centred
};

struct MixtureDensity {
  std::vector<Box> boxes;
  std::vector<Gaussian> gaussians;
};

using DensitySpec = std::variant<MixtureDensity, GridDensity>;

/// m_0 as a histogram (gaussians are binned with exact erf cell masses).
PiecewiseExp density_histogram(const DensitySpec& density);

struct DensityApproximation {
  PeakonState state;
  PiecewiseExp density;   // m_0
  PiecewiseExp target;    // u_0 = 1/2 exp(-|.|) * m_0
  double mass = 0.0;
  double distance = 0.0;  // ||field(state) - u_0||_{H^1}
};

/// N cells of equal mass; p_i = mass_i / 2, q_i = centroid. Throws
/// DomainError for zero mass or negative density.
DensityApproximation approximate_from_density(const DensitySpec& density, std::size_t count);

}  // namespace peakon
