#pragma once

// The isospectral matrix A_N = (p_j exp(-|q_i - q_j| / 2)) and its spectrum,
// computed through the symmetric similarity B D B with B = Lambda^{1/2}.

#include <cstddef>
#include <vector>

#include "peakon/dynamics.hpp"

namespace peakon {

/// Dense row-major square matrix.
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t size) : n(size), data(size * size, 0.0) {}

  static DenseMatrix identity(std::size_t size);

  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }

  DenseMatrix operator*(const DenseMatrix& other) const;
  std::vector<double> operator*(const std::vector<double>& v) const;
  DenseMatrix transposed() const;
  double frobenius() const;
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column k belongs to values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi. Stops when the off-diagonal Frobenius norm is below
/// 1e-14 ||M||. Throws DomainError if M is not symmetric to 1e-12 and
/// ConvergenceError after 100 sweeps.
EigenDecomposition symmetric_eigen(const DenseMatrix& m);

DenseMatrix peakon_matrix(const PeakonState& s);

struct Spectrum {
  std::vector<double> lambda;  // ascending
  /// Eigenvectors of A_N (columns), v = B w for the eigenvectors w of B D B,
  /// normalised to unit Euclidean length.
  DenseMatrix vectors;
};

/// Throws ConditioningError when Lambda is numerically singular.
Spectrum spectrum(const PeakonState& s);

/// max_i |(A_N v - lambda v)_i|.
double eigen_residual(const PeakonState& s, double lambda, const std::vector<double>& v);

}  // namespace peakon
