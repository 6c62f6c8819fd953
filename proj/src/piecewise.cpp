#include "peakon/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "peakon/errors.hpp"
#include "peakon/numeric.hpp"

namespace peakon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rates closer than this to +-1 resonate with the Helmholtz kernel.
constexpr double kResonanceTol = 1e-8;

// A finite point of [lo, hi] used to pin rate-zero products.
double finite_point(double lo, double hi) {
  if (std::isfinite(lo)) return lo;
  if (std::isfinite(hi)) return hi;
  return 0.0;
}

// Anchors every term, merges equal rates and drops zeros. Sorted by rate so
// that the representation is canonical.
std::vector<ExpTerm> canonical(std::vector<ExpTerm> terms, double lo, double hi) {
  for (ExpTerm& t : terms) t = anchored(t, lo, hi);
  std::stable_sort(terms.begin(), terms.end(),
                   [](const ExpTerm& a, const ExpTerm& b) { return a.rate < b.rate; });
  std::vector<ExpTerm> out;
  for (const ExpTerm& t : terms) {
    if (!out.empty() && out.back().rate == t.rate && out.back().ref == t.ref) {
      out.back().coef += t.coef;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const ExpTerm& t) { return t.coef == 0.0; });
  return out;
}

ExpTerm product_term(const ExpTerm& a, const ExpTerm& b, double lo, double hi) {
  const double rate = a.rate + b.rate;
  double anchor;
  if (rate > 0.0 && std::isfinite(hi)) {
    anchor = hi;
  } else if (rate < 0.0 && std::isfinite(lo)) {
    anchor = lo;
  } else {
    anchor = finite_point(lo, hi);
  }
  const double coef = a.coef * b.coef *
                      std::exp(a.rate * (anchor - a.ref) + b.rate * (anchor - b.ref));
  return rate == 0.0 ? ExpTerm{coef, 0.0, 0.0} : ExpTerm{coef, rate, anchor};
}

// Finite cut points of both operands, with a lookup of the piece covering
// each elementary interval.
std::vector<double> merged_cuts(const PiecewiseExp& a, const PiecewiseExp& b) {
  std::vector<double> cuts = a.breakpoints();
  const std::vector<double> more = b.breakpoints();
  cuts.insert(cuts.end(), more.begin(), more.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

const std::vector<ExpTerm>* piece_terms(const PiecewiseExp& f, double lo, double hi) {
  static const std::vector<ExpTerm> none;
  if (f.empty()) return &none;
  double probe;
  if (std::isfinite(lo) && std::isfinite(hi)) {
    probe = 0.5 * (lo + hi);
  } else if (std::isfinite(lo)) {
    probe = lo + 1.0;
  } else if (std::isfinite(hi)) {
    probe = hi - 1.0;
  } else {
    probe = 0.0;
  }
  const auto& pieces = f.pieces();
  auto it = std::upper_bound(pieces.begin(), pieces.end(), probe,
                             [](double v, const ExpPiece& p) { return v < p.hi; });
  if (it == pieces.end()) --it;
  return &it->terms;
}

template <typename Combine>
PiecewiseExp combine(const PiecewiseExp& a, const PiecewiseExp& b, Combine op) {
  const std::vector<double> cuts = merged_cuts(a, b);
  std::vector<ExpPiece> pieces;
  pieces.reserve(cuts.size() + 1);
  for (std::size_t k = 0; k <= cuts.size(); ++k) {
    const double lo = k == 0 ? -kInf : cuts[k - 1];
    const double hi = k == cuts.size() ? kInf : cuts[k];
    std::vector<ExpTerm> terms = op(*piece_terms(a, lo, hi), *piece_terms(b, lo, hi), lo, hi);
    pieces.push_back({lo, hi, canonical(std::move(terms), lo, hi)});
  }
  return PiecewiseExp(std::move(pieces));
}

void require_decay(const PiecewiseExp& f) {
  for (const ExpPiece& p : f.pieces()) {
    for (const ExpTerm& t : p.terms) {
      if ((!std::isfinite(p.lo) && !(t.rate > 0.0)) || (!std::isfinite(p.hi) && !(t.rate < 0.0))) {
        throw DomainError("helmholtz_inverse: source does not decay at infinity");
      }
    }
  }
}

}  // namespace

double ExpTerm::at(double x) const noexcept {
  if (coef == 0.0) return 0.0;
  return coef * std::exp(rate * (x - ref));
}

ExpTerm anchored(const ExpTerm& term, double lo, double hi) {
  if (term.rate == 0.0) return {term.coef, 0.0, 0.0};
  double ref = term.ref;
  if (term.rate > 0.0 && std::isfinite(hi)) {
    ref = hi;
  } else if (term.rate < 0.0 && std::isfinite(lo)) {
    ref = lo;
  }
  if (ref == term.ref) return term;
  return {term.coef * std::exp(term.rate * (ref - term.ref)), term.rate, ref};
}

double integrate_term(const ExpTerm& term, double lo, double hi) {
  if (term.coef == 0.0 || !(lo < hi)) return 0.0;
  const double r = term.rate;
  const double width = hi - lo;
  if (r == 0.0) {
    if (!std::isfinite(width)) throw DomainError("integrate_term: non-decaying integrand");
    return term.coef * width;
  }
  if (r > 0.0) {
    if (!std::isfinite(hi)) throw DomainError("integrate_term: integrand grows at +inf");
    const double scale = term.coef * std::exp(r * (hi - term.ref));
    return scale * (-std::expm1(-r * width)) / r;
  }
  if (!std::isfinite(lo)) throw DomainError("integrate_term: integrand grows at -inf");
  const double scale = term.coef * std::exp(r * (lo - term.ref));
  return scale * (-std::expm1(r * width)) / (-r);
}

double integrate_product(const ExpTerm& a, const ExpTerm& b, double lo, double hi) {
  if (a.coef == 0.0 || b.coef == 0.0 || !(lo < hi)) return 0.0;
  const double rate = a.rate + b.rate;
  if ((rate > 0.0 && !std::isfinite(hi)) || (rate < 0.0 && !std::isfinite(lo)) ||
      (rate == 0.0 && !std::isfinite(hi - lo))) {
    throw DomainError("integrate_product: non-decaying integrand");
  }
  return integrate_term(product_term(a, b, lo, hi), lo, hi);
}

double ExpPiece::at(double x) const noexcept {
  double v = 0.0;
  for (const ExpTerm& t : terms) v += t.at(x);
  return v;
}

PiecewiseExp::PiecewiseExp(std::vector<ExpPiece> pieces) : pieces_(std::move(pieces)) {
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const bool first_ok = k > 0 || pieces_[k].lo == -kInf;
    const bool last_ok = k + 1 < pieces_.size() || pieces_[k].hi == kInf;
    const bool joined = k == 0 || pieces_[k].lo == pieces_[k - 1].hi;
    if (!first_ok || !last_ok || !joined || !(pieces_[k].lo < pieces_[k].hi)) {
      throw DomainError("PiecewiseExp: pieces must be contiguous and cover the line");
    }
  }
}

PiecewiseExp PiecewiseExp::from_field(const PeakedField& u) {
  std::vector<ExpPiece> pieces;
  for (const Segment& s : segments(u).segments) {
    ExpPiece p{s.lo, s.hi, {}};
    if (s.decay != 0.0) p.terms.push_back({s.decay, -1.0, s.lo});
    if (s.grow != 0.0) p.terms.push_back({s.grow, 1.0, s.hi});
    pieces.push_back(std::move(p));
  }
  return PiecewiseExp(std::move(pieces));
}

PiecewiseExp PiecewiseExp::derivative_of(const PeakedField& u) {
  std::vector<ExpPiece> pieces;
  for (const Segment& s : segments(u).segments) {
    ExpPiece p{s.lo, s.hi, {}};
    if (s.decay != 0.0) p.terms.push_back({-s.decay, -1.0, s.lo});
    if (s.grow != 0.0) p.terms.push_back({s.grow, 1.0, s.hi});
    pieces.push_back(std::move(p));
  }
  return PiecewiseExp(std::move(pieces));
}

PiecewiseExp PiecewiseExp::histogram(const std::vector<double>& edges,
                                     const std::vector<double>& heights) {
  if (edges.size() != heights.size() + 1 || heights.empty()) {
    throw DomainError("histogram: need one more edge than heights");
  }
  std::vector<ExpPiece> pieces;
  pieces.push_back({-kInf, edges.front(), {}});
  for (std::size_t k = 0; k < heights.size(); ++k) {
    if (!(edges[k] < edges[k + 1])) throw DomainError("histogram: edges must increase");
    ExpPiece p{edges[k], edges[k + 1], {}};
    if (heights[k] != 0.0) p.terms.push_back({heights[k], 0.0, 0.0});
    pieces.push_back(std::move(p));
  }
  pieces.push_back({edges.back(), kInf, {}});
  return PiecewiseExp(std::move(pieces));
}

double PiecewiseExp::operator()(double x) const {
  if (pieces_.empty()) return 0.0;
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const ExpPiece& p) { return v < p.hi; });
  if (it == pieces_.end()) --it;
  return it->at(x);
}

double PiecewiseExp::integral() const {
  CompensatedSum s;
  for (const ExpPiece& p : pieces_) {
    for (const ExpTerm& t : p.terms) s += integrate_term(t, p.lo, p.hi);
  }
  return s.value();
}

PiecewiseExp PiecewiseExp::operator+(const PiecewiseExp& other) const {
  return combine(*this, other,
                 [](const std::vector<ExpTerm>& a, const std::vector<ExpTerm>& b, double, double) {
                   std::vector<ExpTerm> out(a);
                   out.insert(out.end(), b.begin(), b.end());
                   return out;
                 });
}

PiecewiseExp PiecewiseExp::operator*(const PiecewiseExp& other) const {
  return combine(*this, other,
                 [](const std::vector<ExpTerm>& a, const std::vector<ExpTerm>& b, double lo,
                    double hi) {
                   std::vector<ExpTerm> out;
                   out.reserve(a.size() * b.size());
                   for (const ExpTerm& x : a) {
                     for (const ExpTerm& y : b) out.push_back(product_term(x, y, lo, hi));
                   }
                   return out;
                 });
}

PiecewiseExp PiecewiseExp::scaled(double factor) const {
  PiecewiseExp out = *this;
  for (ExpPiece& p : out.pieces_) {
    for (ExpTerm& t : p.terms) t.coef *= factor;
  }
  return out;
}

std::vector<double> PiecewiseExp::breakpoints() const {
  std::vector<double> cuts;
  for (std::size_t k = 1; k < pieces_.size(); ++k) cuts.push_back(pieces_[k].lo);
  return cuts;
}

PiecewiseExp energy_density(const PeakedField& u) {
  const PiecewiseExp f = PiecewiseExp::from_field(u);
  const PiecewiseExp fx = PiecewiseExp::derivative_of(u);
  return f * f + fx * fx;
}

PiecewiseExp cubic_density(const PeakedField& u) {
  return PiecewiseExp::from_field(u) * energy_density(u);
}

double helmholtz_inverse(const PiecewiseExp& f, double x) {
  if (!std::isfinite(x)) throw DomainError("helmholtz_inverse: non-finite argument");
  require_decay(f);
  const ExpTerm left_kernel{0.5, 1.0, x};    // y < x
  const ExpTerm right_kernel{0.5, -1.0, x};  // y > x
  CompensatedSum s;
  for (const ExpPiece& p : f.pieces()) {
    for (const ExpTerm& t : p.terms) {
      if (p.lo < x) s += integrate_product(t, left_kernel, p.lo, std::min(p.hi, x));
      if (p.hi > x) s += integrate_product(t, right_kernel, std::max(p.lo, x), p.hi);
    }
  }
  return s.value();
}

PiecewiseExp helmholtz_inverse(const PiecewiseExp& f) {
  const auto& in = f.pieces();
  const std::size_t n = in.size();
  if (n == 0) return {};
  require_decay(f);

  // carry_left[k] = int_{-inf}^{lo_k} exp(y - lo_k) f(y) dy,
  // carry_right[k] = int_{hi_k}^{inf} exp(-(y - hi_k)) f(y) dy.
  std::vector<double> carry_left(n, 0.0);
  std::vector<double> carry_right(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const ExpPiece& prev = in[k - 1];
    CompensatedSum s;
    if (k > 1) s += carry_left[k - 1] * std::exp(-(in[k].lo - in[k - 1].lo));
    for (const ExpTerm& t : prev.terms) {
      s += integrate_product(t, {1.0, 1.0, in[k].lo}, prev.lo, prev.hi);
    }
    carry_left[k] = s.value();
  }
  for (std::size_t k = n - 1; k-- > 0;) {
    const ExpPiece& next = in[k + 1];
    CompensatedSum s;
    if (k + 2 < n) s += carry_right[k + 1] * std::exp(-(in[k + 1].hi - in[k].hi));
    for (const ExpTerm& t : next.terms) {
      s += integrate_product(t, {1.0, -1.0, in[k].hi}, next.lo, next.hi);
    }
    carry_right[k] = s.value();
  }

  std::vector<ExpPiece> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const ExpPiece& p = in[k];
    std::vector<ExpTerm> terms;
    for (const ExpTerm& raw : p.terms) {
      const ExpTerm t = anchored(raw, p.lo, p.hi);
      const double r = t.rate;
      if (std::fabs(r - 1.0) < kResonanceTol || std::fabs(r + 1.0) < kResonanceTol) {
        throw DomainError("helmholtz_inverse: exponent resonant with the kernel");
      }
      terms.push_back({t.coef / (1.0 - r * r), r, t.ref});
      if (std::isfinite(p.lo)) {
        terms.push_back({-0.5 * t.coef / (r + 1.0) * std::exp(r * (p.lo - t.ref)), -1.0, p.lo});
      }
      if (std::isfinite(p.hi)) {
        terms.push_back({0.5 * t.coef / (r - 1.0) * std::exp(r * (p.hi - t.ref)), 1.0, p.hi});
      }
    }
    if (k > 0) terms.push_back({0.5 * carry_left[k], -1.0, p.lo});
    if (k + 1 < n) terms.push_back({0.5 * carry_right[k], 1.0, p.hi});
    out.push_back({p.lo, p.hi, canonical(std::move(terms), p.lo, p.hi)});
  }
  return PiecewiseExp(std::move(out));
}

}  // namespace peakon
