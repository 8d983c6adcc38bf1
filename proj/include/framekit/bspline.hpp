#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <vector>

// Centered cardinal B-splines as exact piecewise polynomials. Coefficients are
// computed once by the convolution recursion in rational arithmetic, so values
// like B_8(0) = 151/315 reproduce to the last bit of the double conversion.

namespace framekit {

using Rational = boost::rational<std::int64_t>;

class BsplineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Piecewise polynomial on unit-spaced knots: piece j lives on
// [start + j, start + j + 1) in the local variable t = x - (start + j).
// Evaluates to exactly zero outside [start, start + pieces.size()).
class PiecewisePolynomial {
 public:
  PiecewisePolynomial(Rational start, std::vector<std::vector<Rational>> pieces)
      : start_(start), pieces_(std::move(pieces)) {
    cache_doubles();
  }

  const Rational& start() const { return start_; }
  Rational end() const { return start_ + Rational(static_cast<std::int64_t>(pieces_.size())); }
  const std::vector<std::vector<Rational>>& pieces() const { return pieces_; }

  Rational evaluate_exact(const Rational& x) const {
    const Rational u = x - start_;
    if (u < Rational(0)) return Rational(0);
    const std::int64_t j = u.numerator() / u.denominator();  // floor for u >= 0
    if (j >= static_cast<std::int64_t>(pieces_.size())) return Rational(0);
    const Rational t = u - Rational(j);
    const auto& c = pieces_[static_cast<size_t>(j)];
    Rational v(0);
    for (size_t i = c.size(); i-- > 0;) v = v * t + c[i];
    return v;
  }

  double operator()(double x) const {
    const double u = x - dstart_;
    if (u < 0.0 || u >= static_cast<double>(dpieces_.size())) return 0.0;
    auto j = static_cast<size_t>(u);
    if (j >= dpieces_.size()) return 0.0;
    const double t = u - static_cast<double>(j);
    const auto& c = dpieces_[j];
    double v = 0.0;
    for (size_t i = c.size(); i-- > 0;) v = v * t + c[i];
    return v;
  }

  // p(x + n) for integer n.
  PiecewisePolynomial shifted(std::int64_t n) const {
    return PiecewisePolynomial(start_ - Rational(n), pieces_);
  }

  // Pointwise sum; knot grids must differ by an integer.
  static PiecewisePolynomial sum(const std::vector<PiecewisePolynomial>& parts) {
    if (parts.empty()) throw BsplineError("PiecewisePolynomial::sum: empty list");
    Rational lo = parts[0].start();
    Rational hi = parts[0].end();
    for (const auto& p : parts) {
      if ((p.start() - parts[0].start()).denominator() != 1)
        throw BsplineError("PiecewisePolynomial::sum: misaligned knot grids");
      lo = std::min(lo, p.start());
      hi = std::max(hi, p.end());
    }
    const auto n = static_cast<size_t>((hi - lo).numerator());
    std::vector<std::vector<Rational>> pieces(n);
    for (const auto& p : parts) {
      const auto offset = static_cast<size_t>((p.start() - lo).numerator());
      for (size_t j = 0; j < p.pieces().size(); ++j) {
        auto& dst = pieces[offset + j];
        const auto& src = p.pieces()[j];
        if (dst.size() < src.size()) dst.resize(src.size(), Rational(0));
        for (size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
      }
    }
    return PiecewisePolynomial(lo, std::move(pieces));
  }

 private:
  void cache_doubles() {
    dstart_ = boost::rational_cast<double>(start_);
    dpieces_.reserve(pieces_.size());
    for (const auto& piece : pieces_) {
      std::vector<double> c;
      c.reserve(piece.size());
      for (const auto& r : piece) c.push_back(boost::rational_cast<double>(r));
      dpieces_.push_back(std::move(c));
    }
  }

  Rational start_;
  std::vector<std::vector<Rational>> pieces_;
  double dstart_ = 0.0;
  std::vector<std::vector<double>> dpieces_;
};

namespace detail {

// Antiderivative pieces A_j(t) = C_j + int_0^t p_j, with C chosen so the
// antiderivative is continuous across knots and zero at the left end.
inline std::vector<std::vector<Rational>> piecewise_antiderivative(
    const std::vector<std::vector<Rational>>& pieces) {
  std::vector<std::vector<Rational>> anti;
  anti.reserve(pieces.size());
  Rational c(0);
  for (const auto& p : pieces) {
    std::vector<Rational> a(p.size() + 1, Rational(0));
    a[0] = c;
    for (size_t i = 0; i < p.size(); ++i) a[i + 1] = p[i] / Rational(static_cast<std::int64_t>(i + 1));
    Rational at_one(0);
    for (size_t i = a.size(); i-- > 0;) at_one = at_one + a[i];  // A(1)
    c = at_one;
    anti.push_back(std::move(a));
  }
  return anti;
}

}  // namespace detail

// Centered B-spline B_m: the m-fold convolution power of the indicator of
// [-1/2, 1/2). Support is [-m/2, m/2]; pieces are degree m-1 polynomials.
inline PiecewisePolynomial bspline_polynomial(int order) {
  if (order < 1) throw BsplineError("bspline: order must be >= 1");
  if (order > 16) throw BsplineError("bspline: order > 16 would overflow exact coefficients");
  PiecewisePolynomial b(Rational(-1, 2), {{Rational(1)}});
  for (int m = 1; m < order; ++m) {
    // B_{m+1}(x) = P(x + 1/2) - P(x - 1/2) with P the antiderivative of B_m.
    // New knots sit half a step left of the old ones, and x + 1/2 at new piece
    // j lands exactly in old piece j (local coordinates agree).
    const auto anti = detail::piecewise_antiderivative(b.pieces());
    const size_t old_n = b.pieces().size();
    std::vector<std::vector<Rational>> pieces(old_n + 1);
    for (size_t j = 0; j <= old_n; ++j) {
      std::vector<Rational> upper =
          (j < old_n) ? anti[j] : std::vector<Rational>{Rational(1)};
      if (j > 0) {
        const auto& lower = anti[j - 1];
        if (upper.size() < lower.size()) upper.resize(lower.size(), Rational(0));
        for (size_t i = 0; i < lower.size(); ++i) upper[i] -= lower[i];
      }
      pieces[j] = std::move(upper);
    }
    b = PiecewisePolynomial(b.start() - Rational(1, 2), std::move(pieces));
  }
  return b;
}

// sum_{n = -shift_range .. shift_range} p(x + n), exact.
inline PiecewisePolynomial lattice_sum(const PiecewisePolynomial& p, std::int64_t shift_range) {
  std::vector<PiecewisePolynomial> parts;
  parts.reserve(static_cast<size_t>(2 * shift_range + 1));
  for (std::int64_t n = -shift_range; n <= shift_range; ++n) parts.push_back(p.shifted(n));
  return PiecewisePolynomial::sum(parts);
}

}  // namespace framekit
