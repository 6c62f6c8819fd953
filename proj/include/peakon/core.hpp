#pragma once

// Exact algebra of peaked fields u(x) = sum_i a_i exp(-|x - r_i|).

#include <cstddef>
#include <span>
#include <vector>

namespace peakon {

/// Nodes closer than this are merged on construction (amplitudes summed).
inline constexpr double kNodeMergeTol = 1e-12;

/// A finite signed combination of unit peakons, sum_i a_i exp(-|x - r_i|).
///
/// Nodes are kept strictly increasing. The constructor sorts its input and
/// merges nodes that lie within kNodeMergeTol of each other, so differences
/// of fields that share nodes cancel exactly.
class PeakedField {
 public:
  PeakedField() = default;
  PeakedField(std::vector<double> amps, std::vector<double> nodes);

  static PeakedField peakon(double speed, double position);

  std::size_t size() const noexcept { return amps_.size(); }
  bool empty() const noexcept { return amps_.empty(); }
  std::span<const double> amps() const noexcept { return amps_; }
  std::span<const double> nodes() const noexcept { return nodes_; }

  double operator()(double x) const;

  PeakedField operator+(const PeakedField& other) const;
  PeakedField operator-(const PeakedField& other) const;
  PeakedField scaled(double factor) const;

  /// True when every amplitude is strictly positive.
  bool positive() const noexcept;

  friend bool operator==(const PeakedField&, const PeakedField&) = default;

 private:
  std::vector<double> amps_;
  std::vector<double> nodes_;
};

/// Sum of unit-speed peakons sum_j speeds_j exp(-|x - positions_j|).
PeakedField train(std::span<const double> speeds, std::span<const double> positions);

/// One interval of the segment decomposition. On (lo, hi)
///
///   u(x) = grow * exp(x - hi) + decay * exp(-(x - lo)),
///
/// where `grow` collects the peakons to the right of the interval and
/// `decay` those to the left. Anchoring each exponential at the end where it
/// is largest keeps both coefficients bounded by sum |a_i| whatever the node
/// positions. The leftmost interval has lo = -inf and decay = 0, the
/// rightmost hi = +inf and grow = 0.
struct Segment {
  double lo;
  double hi;
  double grow;
  double decay;

  double value(double x) const noexcept;
  double slope(double x) const noexcept;
};

struct SegmentForm {
  std::vector<Segment> segments;  // N + 1 intervals, or none for N = 0
};

double eval(const PeakedField& field, double x);

/// Almost-everywhere derivative, with sgn(0) = 0 at the nodes.
double eval_dx(const PeakedField& field, double x);

SegmentForm segments(const PeakedField& field);

/// H^1 inner product  int u v + u_x v_x = 2 sum_ij a_i b_j exp(-|r_i - s_j|).
double h1_inner(const PeakedField& u, const PeakedField& v);

/// H^1 distance, from the Gram form of the joint difference field.
double h1_dist(const PeakedField& u, const PeakedField& v);

}  // namespace peakon
