#pragma once

// Conserved functionals E, F and their weighted (localized) versions.

#include <span>
#include <vector>

#include "peakon/core.hpp"
#include "peakon/piecewise.hpp"

namespace peakon {

/// E(u) = int u^2 + u_x^2, exact Gram form.
double energy(const PeakedField& u);

/// F(u) = int u^3 + u u_x^2, exact segment integration.
double moment_f(const PeakedField& u);

// The monotone cut-off Psi. Exponential tails 1/2 e^x (x < -1/2) and
// 1 - 1/2 e^{-x} (x > 1/2) joined by the odd quintic that matches value,
// first and second derivative at +-1/2.
double psi(double x);
double psi_derivative(double x, int order);
/// Psi((x - center) / scale).
double psi_scaled(double x, double scale, double center);

/// Sampled checks of the constraints the weight must satisfy.
struct PsiShapeReport {
  double min_slope;            // min Psi' over the blend
  double max_third_ratio;      // max |Psi'''| / |Psi'| over [-1/2, 1/2]
  double max_left_ratio;       // max Psi / (2 e^{-|x|}) over [-1/2, 0]
  double max_right_ratio;      // max (1 - Psi) / (2 e^{-|x|}) over [0, 1/2]
  double max_range_violation;  // max distance of Psi outside (0, 1]
  bool monotone;               // Psi > 0 and Psi' > 0 on [-20, 20]
  bool ok() const noexcept;
};

PsiShapeReport verify_psi_shape(int samples = 10000);

/// A weight built from translated copies of Psi_K:
///
///   w(x) = constant + sum_k sign_k * Psi((x - center_k) / K).
///
/// Covers Psi_K(. - y), 1 - Psi_K(. - y), Psi_K(. - y) - Psi_K(. - y') and
/// the constant weight of a one-element partition.
class WeightProfile {
 public:
  struct Term {
    double sign;
    double center;
  };

  static WeightProfile constant(double value = 1.0);
  static WeightProfile psi(double scale, double center);
  static WeightProfile one_minus_psi(double scale, double center);
  static WeightProfile psi_difference(double scale, double left, double right);

  double scale() const noexcept { return scale_; }
  double constant_part() const noexcept { return constant_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  double operator()(double x) const { return derivative(x, 0); }
  double derivative(double x, int order) const;

  /// Blend edges center_k -+ K/2, sorted.
  std::vector<double> breakpoints() const;

 private:
  WeightProfile(double scale, double constant, std::vector<Term> terms);

  double scale_ = 1.0;
  double constant_ = 0.0;
  std::vector<Term> terms_;
};

/// Partition of unity Phi_1 = 1 - Psi_K(. - y_2), Phi_i = Psi_K(. - y_i) -
/// Psi_K(. - y_{i+1}), Phi_N = Psi_K(. - y_N). `cuts` holds y_2 < ... < y_N.
/// Throws ConstraintError for K < 4.
std::vector<WeightProfile> partition(std::span<const double> cuts, double scale);

/// int f * w^{(order)}: closed form where the weight is exponential,
/// composite 32-point Gauss-Legendre on blend intervals.
double weighted_integral(const PiecewiseExp& f, const WeightProfile& w, int order = 0);

/// int (u^2 + u_x^2) w.
double weighted_energy(const PeakedField& u, const WeightProfile& w);

/// int (u^3 + u u_x^2) w.
double weighted_f(const PeakedField& u, const WeightProfile& w);

/// 1/4 min(c_1, c_2 - c_1, ..., c_N - c_{N-1}).
double sigma0(std::span<const double> speeds);

/// Default weight scale max(4, sqrt(L) / 8).
double default_scale(double spacing);

}  // namespace peakon
