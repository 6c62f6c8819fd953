#include "peakon/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "peakon/errors.hpp"
#include "peakon/numeric.hpp"

namespace peakon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}

double sgn(double x) noexcept { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

PeakedField::PeakedField(std::vector<double> amps, std::vector<double> nodes) {
  if (amps.size() != nodes.size()) {
    throw DomainError("PeakedField: amps and nodes differ in length");
  }
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (!std::isfinite(amps[i]) || !std::isfinite(nodes[i])) {
      throw DomainError("PeakedField: non-finite amplitude or node");
    }
  }
  std::vector<std::size_t> order(amps.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });
  amps_.reserve(amps.size());
  nodes_.reserve(nodes.size());
  for (std::size_t k : order) {
    if (!nodes_.empty() && nodes[k] - nodes_.back() < kNodeMergeTol) {
      amps_.back() += amps[k];
    } else {
      amps_.push_back(amps[k]);
      nodes_.push_back(nodes[k]);
    }
  }
}

PeakedField PeakedField::peakon(double speed, double position) {
  return PeakedField({speed}, {position});
}

double PeakedField::operator()(double x) const { return eval(*this, x); }

PeakedField PeakedField::operator+(const PeakedField& other) const {
  std::vector<double> a(amps_.begin(), amps_.end());
  std::vector<double> r(nodes_.begin(), nodes_.end());
  a.insert(a.end(), other.amps_.begin(), other.amps_.end());
  r.insert(r.end(), other.nodes_.begin(), other.nodes_.end());
  return PeakedField(std::move(a), std::move(r));
}

PeakedField PeakedField::operator-(const PeakedField& other) const {
  return *this + other.scaled(-1.0);
}

PeakedField PeakedField::scaled(double factor) const {
  PeakedField out = *this;
  for (double& a : out.amps_) a *= factor;
  return out;
}

bool PeakedField::positive() const noexcept {
  return std::all_of(amps_.begin(), amps_.end(), [](double a) { return a > 0.0; });
}

PeakedField train(std::span<const double> speeds, std::span<const double> positions) {
  return PeakedField(std::vector<double>(speeds.begin(), speeds.end()),
                     std::vector<double>(positions.begin(), positions.end()));
}

double Segment::value(double x) const noexcept {
  double v = 0.0;
  if (grow != 0.0) v += grow * std::exp(x - hi);
  if (decay != 0.0) v += decay * std::exp(-(x - lo));
  return v;
}

double Segment::slope(double x) const noexcept {
  double v = 0.0;
  if (grow != 0.0) v += grow * std::exp(x - hi);
  if (decay != 0.0) v -= decay * std::exp(-(x - lo));
  return v;
}

double eval(const PeakedField& field, double x) {
  require_finite(x, "eval");
  CompensatedSum s;
  const auto a = field.amps();
  const auto r = field.nodes();
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::exp(-std::fabs(x - r[i]));
  return s.value();
}

double eval_dx(const PeakedField& field, double x) {
  require_finite(x, "eval_dx");
  CompensatedSum s;
  const auto a = field.amps();
  const auto r = field.nodes();
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += -sgn(x - r[i]) * a[i] * std::exp(-std::fabs(x - r[i]));
  }
  return s.value();
}

SegmentForm segments(const PeakedField& field) {
  SegmentForm form;
  const auto a = field.amps();
  const auto r = field.nodes();
  const std::size_t n = a.size();
  if (n == 0) return form;
  form.segments.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    Segment seg{};
    seg.lo = k == 0 ? -kInf : r[k - 1];
    seg.hi = k == n ? kInf : r[k];
    CompensatedSum grow;
    CompensatedSum decay;
    for (std::size_t i = k; i < n; ++i) grow += a[i] * std::exp(seg.hi - r[i]);
    for (std::size_t i = 0; i < k; ++i) decay += a[i] * std::exp(r[i] - seg.lo);
    seg.grow = k == n ? 0.0 : grow.value();
    seg.decay = k == 0 ? 0.0 : decay.value();
    form.segments.push_back(seg);
  }
  return form;
}

double h1_inner(const PeakedField& u, const PeakedField& v) {
  CompensatedSum s;
  const auto a = u.amps();
  const auto r = u.nodes();
  const auto b = v.amps();
  const auto q = v.nodes();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      s += 2.0 * a[i] * b[j] * std::exp(-std::fabs(r[i] - q[j]));
    }
  }
  return s.value();
}

double h1_dist(const PeakedField& u, const PeakedField& v) {
  const PeakedField w = u - v;
  return std::sqrt(std::max(0.0, h1_inner(w, w)));
}

}  // namespace peakon
