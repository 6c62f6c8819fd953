#pragma once

// Piecewise-exponential functions and their closed-form calculus. This is the
// quadrature substrate for every integral of peaked fields: products of
// segments, weights in their exponential tails, and the Helmholtz inverse.

#include <vector>

#include "peakon/core.hpp"

namespace peakon {

/// coef * exp(rate * (x - ref)).
struct ExpTerm {
  double coef;
  double rate;
  double ref;

  double at(double x) const noexcept;
};

/// Integral of a single term over [lo, hi]; either bound may be infinite.
/// Throws DomainError when the integral diverges.
double integrate_term(const ExpTerm& term, double lo, double hi);

/// Integral of the product of two terms over [lo, hi].
double integrate_product(const ExpTerm& a, const ExpTerm& b, double lo, double hi);

/// Rewrites `term` so that it is anchored where it is largest on [lo, hi]
/// (hi for growing, lo for decaying terms). The represented function is
/// unchanged up to rounding.
ExpTerm anchored(const ExpTerm& term, double lo, double hi);

struct ExpPiece {
  double lo;
  double hi;
  std::vector<ExpTerm> terms;

  double at(double x) const noexcept;
};

/// A function that is a finite sum of exponentials on each piece. Pieces are
/// contiguous and cover the real line; an empty piece list is the zero
/// function.
class PiecewiseExp {
 public:
  PiecewiseExp() = default;
  explicit PiecewiseExp(std::vector<ExpPiece> pieces);

  /// u itself, from the segment decomposition.
  static PiecewiseExp from_field(const PeakedField& u);
  /// The a.e. derivative u_x.
  static PiecewiseExp derivative_of(const PeakedField& u);
  /// Piecewise-constant function: heights[k] on [edges[k], edges[k+1]],
  /// zero outside.
  static PiecewiseExp histogram(const std::vector<double>& edges,
                                const std::vector<double>& heights);

  const std::vector<ExpPiece>& pieces() const noexcept { return pieces_; }
  bool empty() const noexcept { return pieces_.empty(); }

  double operator()(double x) const;
  double integral() const;

  /// Sum and product on the common refinement of the breakpoints. Terms with
  /// equal rates are merged after anchoring.
  PiecewiseExp operator+(const PiecewiseExp& other) const;
  PiecewiseExp operator*(const PiecewiseExp& other) const;
  PiecewiseExp scaled(double factor) const;

  /// Breakpoints between pieces (finite piece bounds, sorted).
  std::vector<double> breakpoints() const;

 private:
  std::vector<ExpPiece> pieces_;
};

/// Densities of a peaked field used by the functionals.
PiecewiseExp energy_density(const PeakedField& u);  // u^2 + u_x^2
PiecewiseExp cubic_density(const PeakedField& u);   // u^3 + u u_x^2

/// (1 - d^2/dx^2)^{-1} f = 1/2 exp(-|.|) * f at a point. Exponents resonant
/// with the kernel (rate = +-1) are handled through the polynomial-times-
/// exponential antiderivative. Throws DomainError if f does not decay.
double helmholtz_inverse(const PiecewiseExp& f, double x);

/// (1 - d^2/dx^2)^{-1} f as a piecewise-exponential function with the same
/// breakpoints. Requires every rate of f to be away from +-1.
PiecewiseExp helmholtz_inverse(const PiecewiseExp& f);

}  // namespace peakon
