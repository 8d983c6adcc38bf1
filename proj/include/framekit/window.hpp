#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "framekit/bspline.hpp"

// Exactly evaluable real-line windows: Gaussians, centered B-splines, their
// lattice combinations and quotients. Every window carries support or decay
// metadata so lattice-sum truncations can be certified.

namespace framekit {

inline constexpr double kPi = 3.14159265358979323846;

class WindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x < hi; }
};

// Pointwise upper bound on |w|, with certified lattice-sum tails.
class Envelope {
 public:
  static Envelope compact(Interval support, double sup) {
    Envelope e;
    e.node_ = Compact{support, sup};
    return e;
  }
  // |w(x)| <= amplitude * exp(-alpha x^2)
  static Envelope gaussian(double amplitude, double alpha) {
    if (!(alpha > 0.0)) throw WindowError("Envelope: Gaussian decay rate must be positive");
    Envelope e;
    e.node_ = Gauss{amplitude, alpha};
    return e;
  }
  static Envelope sum(Envelope a, Envelope b) {
    Envelope e;
    e.node_ = Sum{std::make_shared<Envelope>(std::move(a)), std::make_shared<Envelope>(std::move(b))};
    return e;
  }

  double bound(double x) const {
    return std::visit(
        [&](const auto& n) -> double {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Compact>) {
            return (x >= n.support.lo && x <= n.support.hi) ? n.sup : 0.0;
          } else if constexpr (std::is_same_v<T, Gauss>) {
            return n.amplitude * std::exp(-n.alpha * x * x);
          } else {
            return n.a->bound(x) + n.b->bound(x);
          }
        },
        node_);
  }

  double sup() const {
    return std::visit(
        [&](const auto& n) -> double {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Compact>) {
            return n.sup;
          } else if constexpr (std::is_same_v<T, Gauss>) {
            return n.amplitude;
          } else {
            return n.a->sup() + n.b->sup();
          }
        },
        node_);
  }

  // Radius r with bound(x) <= tol whenever |x| >= r.
  double radius(double tol) const {
    return std::visit(
        [&](const auto& n) -> double {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Compact>) {
            return std::max(std::abs(n.support.lo), std::abs(n.support.hi));
          } else if constexpr (std::is_same_v<T, Gauss>) {
            if (tol >= n.amplitude) return 0.0;
            return std::sqrt(std::log(n.amplitude / tol) / n.alpha);
          } else {
            return std::max(n.a->radius(tol / 2.0), n.b->radius(tol / 2.0));
          }
        },
        node_);
  }

  // Upper bound on sum_{j>=0} bound(start + j*step), start >= 0, step > 0.
  double lattice_tail(double start, double step) const {
    return std::visit(
        [&](const auto& n) -> double {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Compact>) {
            if (start > n.support.hi) return 0.0;
            const double count = std::floor((n.support.hi - start) / step) + 1.0;
            return count * n.sup;
          } else if constexpr (std::is_same_v<T, Gauss>) {
            double total = 0.0;
            double x = start;
            for (int i = 0; i < 100000; ++i) {
              const double term = n.amplitude * std::exp(-n.alpha * x * x);
              total += term;
              const double ratio = std::exp(-n.alpha * step * (2.0 * x + step));
              if (ratio < 0.5) {
                total += term * ratio / (1.0 - ratio);
                break;
              }
              x += step;
            }
            return total;
          } else {
            return n.a->lattice_tail(start, step) + n.b->lattice_tail(start, step);
          }
        },
        node_);
  }

  Envelope dilated(double s) const {
    const double as = std::abs(s);
    return std::visit(
        [&](const auto& n) -> Envelope {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Compact>) {
            double lo = n.support.lo / s, hi = n.support.hi / s;
            if (lo > hi) std::swap(lo, hi);
            return compact({lo, hi}, n.sup);
          } else if constexpr (std::is_same_v<T, Gauss>) {
            return gaussian(n.amplitude, n.alpha * as * as);
          } else {
            return sum(n.a->dilated(s), n.b->dilated(s));
          }
        },
        node_);
  }

  Envelope scaled(double c) const {
    const double ac = std::abs(c);
    return std::visit(
        [&](const auto& n) -> Envelope {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Compact>) {
            return compact(n.support, n.sup * ac);
          } else if constexpr (std::is_same_v<T, Gauss>) {
            return gaussian(n.amplitude * ac, n.alpha);
          } else {
            return sum(n.a->scaled(c), n.b->scaled(c));
          }
        },
        node_);
  }

 private:
  struct Compact {
    Interval support;
    double sup;
  };
  struct Gauss {
    double amplitude;
    double alpha;
  };
  struct Sum {
    std::shared_ptr<Envelope> a, b;
  };
  std::variant<Compact, Gauss, Sum> node_;
};

// Real-valued window with exact-zero compact support or a decay envelope.
// Immutable after construction; evaluation is pure.
class Window {
 public:
  Window(std::string kind, std::function<double(double)> eval, std::optional<Interval> support,
         Envelope envelope, double sup_bound, double lipschitz)
      : kind_(std::move(kind)),
        eval_(std::move(eval)),
        support_(support),
        envelope_(std::move(envelope)),
        sup_bound_(sup_bound),
        lipschitz_(lipschitz) {}

  double operator()(double x) const { return eval_(x); }
  const std::string& kind() const { return kind_; }
  const std::optional<Interval>& support() const { return support_; }
  const Envelope& envelope() const { return envelope_; }
  double sup_bound() const { return sup_bound_; }
  double lipschitz() const { return lipschitz_; }
  bool compact() const { return support_.has_value(); }

  // Interval outside which |w| <= tol (exact support when compact).
  Interval effective_interval(double tol) const {
    if (support_) return *support_;
    const double r = envelope_.radius(tol);
    return {-r, r};
  }

 private:
  std::string kind_;
  std::function<double(double)> eval_;
  std::optional<Interval> support_;
  Envelope envelope_;
  double sup_bound_;
  double lipschitz_;
};

// x -> amplitude * exp(-(x/width)^2)
inline Window gaussian_window(double amplitude, double width) {
  if (!(width > 0.0)) throw WindowError("gaussian_window: width must be positive");
  const double alpha = 1.0 / (width * width);
  const double lip = std::abs(amplitude) * std::sqrt(2.0) / width * std::exp(-0.5);
  return Window("gaussian", [amplitude, alpha](double x) { return amplitude * std::exp(-alpha * x * x); },
                std::nullopt, Envelope::gaussian(std::abs(amplitude), alpha), std::abs(amplitude), lip);
}

namespace detail {

inline double piecewise_sup(const PiecewisePolynomial& p) {
  // Coarse but safe: dense scan plus slope bound would be overkill here; the
  // B-spline pieces are low degree, so a fine scan is accurate far beyond the
  // uses of this bound.
  const double lo = boost::rational_cast<double>(p.start());
  const double hi = boost::rational_cast<double>(p.end());
  double sup = 0.0;
  const int n = 4096;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / n;
    sup = std::max(sup, std::abs(p(x)));
  }
  return sup;
}

inline double piecewise_lipschitz(const PiecewisePolynomial& p) {
  // Bound max |p'| by scanning the derivative of each piece.
  double lip = 0.0;
  for (const auto& piece : p.pieces()) {
    for (int i = 0; i <= 64; ++i) {
      const double t = static_cast<double>(i) / 64.0;
      double d = 0.0;
      for (size_t j = piece.size(); j-- > 1;)
        d = d * t + static_cast<double>(j) * boost::rational_cast<double>(piece[j]);
      lip = std::max(lip, std::abs(d));
    }
  }
  return lip;
}

}  // namespace detail

// Centered B-spline of the given order, exact piecewise polynomial.
inline Window bspline_window(int order) {
  auto poly = std::make_shared<PiecewisePolynomial>(bspline_polynomial(order));
  const double half = static_cast<double>(order) / 2.0;
  const double sup = (order == 1) ? 1.0 : (*poly)(0.0);  // B_m peaks at the origin
  const double lip = (order == 1) ? std::numeric_limits<double>::infinity()
                                  : detail::piecewise_lipschitz(*poly);
  return Window("bspline", [poly](double x) { return (*poly)(x); }, Interval{-half, half},
                Envelope::compact({-half, half}, sup), sup, lip);
}

// g(x) = b * sum_{|n| <= N-1} B_N(x + n): constantly b on [-N/2, N/2],
// supported on [-(3N-2)/2, (3N-2)/2]. Valid for 0 < b <= 1/(2N-1).
inline Window ck_dual_window(int order, double b) {
  if (order < 1) throw WindowError("ck_dual_window: order must be >= 1");
  const double bmax = 1.0 / (2.0 * order - 1.0);
  if (!(b > 0.0) || b > bmax + 1e-15)
    throw WindowError("ck_dual_window: b must lie in (0, 1/(2N-1)] = (0, 1/" +
                      std::to_string(2 * order - 1) + "]");
  auto poly = std::make_shared<PiecewisePolynomial>(
      lattice_sum(bspline_polynomial(order), order - 1));
  const double half = (3.0 * order - 2.0) / 2.0;
  const double lip =
      (order == 1) ? std::numeric_limits<double>::infinity() : b * detail::piecewise_lipschitz(*poly);
  return Window("lattice-combination", [poly, b](double x) { return b * (*poly)(x); },
                Interval{-half, half}, Envelope::compact({-half, half}, b), b, lip);
}

// Indicator of [lo, hi).
inline Window indicator_window(double lo, double hi) {
  if (!(hi > lo)) throw WindowError("indicator_window: empty interval");
  return Window("indicator", [lo, hi](double x) { return (x >= lo && x < hi) ? 1.0 : 0.0; },
                Interval{lo, hi}, Envelope::compact({lo, hi}, 1.0), 1.0,
                std::numeric_limits<double>::infinity());
}

inline Window scale_window(const Window& w, double c) {
  std::optional<Interval> support = w.support();
  return Window("scaled", [w, c](double x) { return c * w(x); }, support, w.envelope().scaled(c),
                std::abs(c) * w.sup_bound(), std::abs(c) * w.lipschitz());
}

// x -> w(s x)
inline Window dilate_window(const Window& w, double s) {
  if (s == 0.0) throw WindowError("dilate_window: dilation factor must be nonzero");
  std::optional<Interval> support;
  if (w.support()) {
    double lo = w.support()->lo / s, hi = w.support()->hi / s;
    if (lo > hi) std::swap(lo, hi);
    support = Interval{lo, hi};
  }
  return Window("dilated", [w, s](double x) { return w(s * x); }, support, w.envelope().dilated(s),
                w.sup_bound(), std::abs(s) * w.lipschitz());
}

// l - r. The summed sup would be uselessly loose for near-equal windows, so
// the sup bound is re-certified by a dense scan with the (valid) summed
// Lipschitz constant as step correction; the envelope keeps the summed form
// for tail certificates.
inline Window difference_window(const Window& l, const Window& r) {
  std::optional<Interval> support;
  if (l.support() && r.support())
    support = Interval{std::min(l.support()->lo, r.support()->lo),
                       std::max(l.support()->hi, r.support()->hi)};
  auto eval = [l, r](double x) { return l(x) - r(x); };
  const double lip = l.lipschitz() + r.lipschitz();
  double sup = l.sup_bound() + r.sup_bound();
  if (std::isfinite(lip)) {
    const double edge_tol = 1e-15 * std::max(sup, 1.0);
    Interval scan;
    if (support) {
      scan = *support;
    } else {
      const double rl = l.envelope().radius(edge_tol);
      const double rr = r.envelope().radius(edge_tol);
      const double rad = std::max(rl, rr);
      scan = {-rad, rad};
    }
    const int n = 1 << 16;
    const double step = scan.length() / n;
    double best = 0.0;
    for (int i = 0; i <= n; ++i)
      best = std::max(best, std::abs(eval(scan.lo + step * static_cast<double>(i))));
    sup = std::min(sup, best + lip * step * 0.5 + 2.0 * edge_tol);
  }
  return Window("difference", std::move(eval), support,
                Envelope::sum(l.envelope(), r.envelope()), sup, lip);
}

// Periodized power H(x) = sum_k |h(x + k a)|^2, with inf/sup over one period.
struct PeriodizedPower {
  double period = 0.0;
  std::function<double(double)> eval;
  double inf = 0.0;
  double sup = 0.0;
  double tail_certificate = 0.0;
};

inline PeriodizedPower periodization_power(const Window& h, double a, int grid = 4096) {
  if (!(a > 0.0)) throw WindowError("periodization_power: step must be positive");
  const double tail_tol = 1e-16;
  const Interval active = h.effective_interval(tail_tol);
  double tail = 0.0;
  if (!h.compact()) {
    // Discarded terms each bounded by the envelope beyond the active radius.
    const double edge = std::max(std::abs(active.lo), std::abs(active.hi));
    tail = 2.0 * h.envelope().sup() * h.envelope().lattice_tail(edge, a);
  }
  auto eval = [h, a, active](double x) {
    const auto klo = static_cast<long>(std::ceil((x - active.hi) / a));
    const auto khi = static_cast<long>(std::floor((x - active.lo) / a));
    double s = 0.0;
    for (long k = klo; k <= khi; ++k) {
      const double v = h(x - static_cast<double>(k) * a);
      s += v * v;
    }
    return s;
  };
  PeriodizedPower out;
  out.period = a;
  out.tail_certificate = tail;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double v = eval(a * static_cast<double>(i) / grid);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out.inf = lo;
  out.sup = hi + tail;
  out.eval = std::move(eval);
  return out;
}

// Canonical dual window in the painless case: g = b h / sum_k |h(x + k a)|^2,
// requires supp h inside an interval of length <= 1/b and the periodization
// bounded below.
inline Window painless_canonical_dual(const Window& h, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw WindowError("painless_canonical_dual: a, b must be positive");
  if (!h.compact())
    throw WindowError("painless_canonical_dual: window must be compactly supported");
  const Interval supp = *h.support();
  if (supp.length() > 1.0 / b + 1e-12)
    throw WindowError("painless_canonical_dual: support length exceeds 1/b");
  PeriodizedPower pp = periodization_power(h, a);
  if (!(pp.inf > 0.0))
    throw WindowError("painless_canonical_dual: periodized power not bounded below");
  auto eval = [h, b, supp, H = pp.eval](double x) {
    if (x < supp.lo || x > supp.hi) return 0.0;
    const double hv = h(x);
    if (hv == 0.0) return 0.0;
    return b * hv / H(x);
  };
  const double sup = b * h.sup_bound() / pp.inf;
  const long kmax = static_cast<long>(std::ceil(supp.length() / a)) + 1;
  const double lip_H = 2.0 * h.sup_bound() * h.lipschitz() * static_cast<double>(kmax);
  const double lip = b / pp.inf * h.lipschitz() + b * h.sup_bound() * lip_H / (pp.inf * pp.inf);
  return Window("periodized-quotient", std::move(eval), supp,
                Envelope::compact(supp, sup), sup, lip);
}

// Wiener-space norm: sum over unit cells of the cell sup of |w|, with the
// Gaussian tail certified by the envelope.
inline double wiener_norm(const Window& w, int samples_per_cell = 512) {
  const double tol = 1e-14;
  const Interval active = w.effective_interval(tol);
  const auto nlo = static_cast<long>(std::floor(active.lo));
  const auto nhi = static_cast<long>(std::ceil(active.hi));
  double total = 0.0;
  for (long n = nlo; n < nhi; ++n) {
    double sup = 0.0;
    for (int i = 0; i <= samples_per_cell; ++i) {
      const double x = static_cast<double>(n) + static_cast<double>(i) / samples_per_cell;
      sup = std::max(sup, std::abs(w(x)));
    }
    if (std::isfinite(w.lipschitz())) sup += w.lipschitz() * 0.5 / samples_per_cell;
    total += sup;
  }
  if (!w.compact()) {
    total += w.envelope().lattice_tail(static_cast<double>(nhi), 1.0);
    total += w.envelope().lattice_tail(-static_cast<double>(nlo), 1.0);
  }
  return total;
}

// A finite time-frequency combination sum_j c_j e^{2 pi i mu_j x} base(x - tau_j).
struct LatticeTerm {
  double shift = 0.0;       // tau
  double modulation = 0.0;  // mu
  std::complex<double> coefficient{0.0, 0.0};
};

class LatticeCombination {
 public:
  LatticeCombination(Window base, std::vector<LatticeTerm> terms)
      : base_(std::move(base)), terms_(std::move(terms)) {}

  std::complex<double> operator()(double x) const {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& t : terms_) {
      const double v = base_(x - t.shift);
      if (v == 0.0) continue;
      acc += t.coefficient * std::polar(1.0, 2.0 * kPi * t.modulation * x) * v;
    }
    return acc;
  }

  const Window& base() const { return base_; }
  const std::vector<LatticeTerm>& terms() const { return terms_; }

 private:
  Window base_;
  std::vector<LatticeTerm> terms_;
};

inline LatticeCombination combine(const Window& base, std::vector<LatticeTerm> terms) {
  return LatticeCombination(base, std::move(terms));
}

}  // namespace framekit
