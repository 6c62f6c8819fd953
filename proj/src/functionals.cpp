#include "peakon/functionals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "peakon/errors.hpp"
#include "peakon/numeric.hpp"

namespace peakon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHalfWidth = 0.5;
constexpr int kBlendPanels = 8;

struct Blend {
  double a1, a3, a5;
};

const Blend& blend() {
  static const Blend b = [] {
    const double h = kHalfWidth;
    const double e = 0.5 * std::exp(-h);
    const std::vector<double> m = {h,   h * h * h,     h * h * h * h * h,
                                   1.0, 3.0 * h * h,   5.0 * h * h * h * h,
                                   0.0, 6.0 * h,       20.0 * h * h * h};
    const auto c = solve_linear(m, {0.5 - e, e, -e});
    return Blend{c[0], c[1], c[2]};
  }();
  return b;
}

double blend_derivative(double x, int order) {
  const Blend& b = blend();
  const double x2 = x * x;
  switch (order) {
    case 0: return 0.5 + x * (b.a1 + x2 * (b.a3 + x2 * b.a5));
    case 1: return b.a1 + x2 * (3.0 * b.a3 + 5.0 * b.a5 * x2);
    case 2: return x * (6.0 * b.a3 + 20.0 * b.a5 * x2);
    case 3: return 6.0 * b.a3 + 60.0 * b.a5 * x2;
    case 4: return 120.0 * b.a5 * x;
    case 5: return 120.0 * b.a5;
    default: return 0.0;
  }
}

void require_valid_shape() {
  static const bool ok = verify_psi_shape().ok();
  if (!ok) throw ConstraintError("Psi blend violates its shape constraints");
}

// Exponential form of sign * Psi^{(order)}((x - center)/K) on an interval
// that lies entirely in one tail.
void tail_terms(double sign, double center, double scale, int order, bool left,
                std::vector<ExpTerm>& out) {
  const double k_pow = std::pow(scale, -order);
  if (left) {
    out.push_back({sign * 0.5 * k_pow, 1.0 / scale, center});
    return;
  }
  if (order == 0) {
    out.push_back({sign, 0.0, 0.0});
    out.push_back({-0.5 * sign, -1.0 / scale, center});
  } else {
    const double parity = order % 2 == 1 ? 1.0 : -1.0;
    out.push_back({sign * parity * 0.5 * k_pow, -1.0 / scale, center});
  }
}

}  // namespace

double energy(const PeakedField& u) { return h1_inner(u, u); }

double moment_f(const PeakedField& u) { return cubic_density(u).integral(); }

double psi_derivative(double x, int order) {
  if (x < -kHalfWidth) return 0.5 * std::exp(x);
  if (x > kHalfWidth) {
    const double tail = 0.5 * std::exp(-x);
    if (order == 0) return 1.0 - tail;
    return order % 2 == 1 ? tail : -tail;
  }
  return blend_derivative(x, order);
}

double psi(double x) { return psi_derivative(x, 0); }

double psi_scaled(double x, double scale, double center) {
  return psi((x - center) / scale);
}

bool PsiShapeReport::ok() const noexcept {
  return monotone && min_slope > 0.0 && max_third_ratio <= 10.0 && max_left_ratio <= 1.0 &&
         max_right_ratio <= 1.0 && max_range_violation <= 0.0;
}

PsiShapeReport verify_psi_shape(int samples) {
  PsiShapeReport r{kInf, 0.0, 0.0, 0.0, 0.0, true};
  for (int i = 0; i <= samples; ++i) {
    const double x = -kHalfWidth + (2.0 * kHalfWidth) * i / samples;
    const double d1 = psi_derivative(x, 1);
    r.min_slope = std::min(r.min_slope, d1);
    r.max_third_ratio = std::max(r.max_third_ratio, std::fabs(psi_derivative(x, 3)) / std::fabs(d1));
    const double bound = 2.0 * std::exp(-std::fabs(x));
    if (x <= 0.0) r.max_left_ratio = std::max(r.max_left_ratio, psi(x) / bound);
    if (x >= 0.0) r.max_right_ratio = std::max(r.max_right_ratio, (1.0 - psi(x)) / bound);
  }
  // Range and monotonicity on a wider window, tails included.
  for (int i = 0; i <= samples; ++i) {
    const double x = -20.0 + 40.0 * i / samples;
    const double v = psi(x);
    r.max_range_violation = std::max({r.max_range_violation, -v, v - 1.0});
    if (!(v > 0.0) || !(psi_derivative(x, 1) > 0.0)) r.monotone = false;
  }
  return r;
}

WeightProfile::WeightProfile(double scale, double constant, std::vector<Term> terms)
    : scale_(scale), constant_(constant), terms_(std::move(terms)) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConstraintError("weight scale must be > 0");
  if (!std::isfinite(constant)) throw DomainError("weight constant must be finite");
  for (const Term& t : terms_) {
    if (!std::isfinite(t.center)) throw DomainError("weight center must be finite");
  }
  if (!terms_.empty()) require_valid_shape();
}

WeightProfile WeightProfile::constant(double value) { return {1.0, value, {}}; }

WeightProfile WeightProfile::psi(double scale, double center) {
  return {scale, 0.0, {{1.0, center}}};
}

WeightProfile WeightProfile::one_minus_psi(double scale, double center) {
  return {scale, 1.0, {{-1.0, center}}};
}

WeightProfile WeightProfile::psi_difference(double scale, double left, double right) {
  return {scale, 0.0, {{1.0, left}, {-1.0, right}}};
}

double WeightProfile::derivative(double x, int order) const {
  double v = order == 0 ? constant_ : 0.0;
  const double k_pow = std::pow(scale_, -order);
  for (const Term& t : terms_) v += t.sign * k_pow * psi_derivative((x - t.center) / scale_, order);
  return v;
}

std::vector<double> WeightProfile::breakpoints() const {
  std::vector<double> cuts;
  for (const Term& t : terms_) {
    cuts.push_back(t.center - kHalfWidth * scale_);
    cuts.push_back(t.center + kHalfWidth * scale_);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

std::vector<WeightProfile> partition(std::span<const double> cuts, double scale) {
  if (!(scale >= 4.0)) throw ConstraintError("K must be >= 4");
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (!(cuts[i] > cuts[i - 1])) throw ConstraintError("partition points must increase");
  }
  std::vector<WeightProfile> out;
  if (cuts.empty()) {
    out.push_back(WeightProfile::constant(1.0));
    return out;
  }
  out.push_back(WeightProfile::one_minus_psi(scale, cuts.front()));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    out.push_back(WeightProfile::psi_difference(scale, cuts[i], cuts[i + 1]));
  }
  out.push_back(WeightProfile::psi(scale, cuts.back()));
  return out;
}

double weighted_integral(const PiecewiseExp& f, const WeightProfile& w, int order) {
  if (f.empty()) return 0.0;
  std::vector<double> cuts = f.breakpoints();
  const std::vector<double> wcuts = w.breakpoints();
  cuts.insert(cuts.end(), wcuts.begin(), wcuts.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double K = w.scale();
  const double half = kHalfWidth * K;
  const auto& rule = gauss_legendre_32();
  const auto& pieces = f.pieces();
  CompensatedSum total;
  std::size_t piece = 0;
  std::vector<ExpTerm> wterms;

  for (std::size_t k = 0; k <= cuts.size(); ++k) {
    const double lo = k == 0 ? -kInf : cuts[k - 1];
    const double hi = k == cuts.size() ? kInf : cuts[k];
    while (piece + 1 < pieces.size() && pieces[piece].hi <= lo) ++piece;
    const ExpPiece& fp = pieces[piece];
    if (fp.terms.empty()) continue;

    bool in_blend = false;
    wterms.clear();
    if (order == 0 && w.constant_part() != 0.0) wterms.push_back({w.constant_part(), 0.0, 0.0});
    for (const auto& t : w.terms()) {
      if (hi <= t.center - half) {
        tail_terms(t.sign, t.center, K, order, true, wterms);
      } else if (lo >= t.center + half) {
        tail_terms(t.sign, t.center, K, order, false, wterms);
      } else {
        in_blend = true;
        break;
      }
    }

    if (!in_blend) {
      for (const ExpTerm& a : fp.terms) {
        for (const ExpTerm& b : wterms) total += integrate_product(a, b, lo, hi);
      }
      continue;
    }

    const int panels = std::max(1, static_cast<int>(std::ceil(kBlendPanels * (hi - lo) / K)));
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = lo + p * width;
      const double mid = a + 0.5 * width;
      CompensatedSum panel;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = mid + 0.5 * width * rule.nodes[i];
        panel += rule.weights[i] * fp.at(x) * w.derivative(x, order);
      }
      total += 0.5 * width * panel.value();
    }
  }
  return total.value();
}

double weighted_energy(const PeakedField& u, const WeightProfile& w) {
  return weighted_integral(energy_density(u), w, 0);
}

double weighted_f(const PeakedField& u, const WeightProfile& w) {
  return weighted_integral(cubic_density(u), w, 0);
}

double sigma0(std::span<const double> speeds) {
  if (speeds.empty()) throw ConstraintError("sigma0: no speeds");
  double m = speeds[0];
  for (std::size_t i = 1; i < speeds.size(); ++i) m = std::min(m, speeds[i] - speeds[i - 1]);
  if (!(m > 0.0)) throw ConstraintError("sigma0: speeds must be positive and increasing");
  return 0.25 * m;
}

double default_scale(double spacing) { return std::max(4.0, std::sqrt(spacing) / 8.0); }

}  // namespace peakon
