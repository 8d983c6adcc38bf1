#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

// Composite Gauss-Legendre quadrature with panel-doubling refinement.

namespace framekit {

namespace detail {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 8> kGlNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
inline constexpr std::array<double, 8> kGlWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <class F, class R>
R gl_panels(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  R total{};
  for (int p = 0; p < panels; ++p) {
    const double mid = a + h * (p + 0.5);
    const double half = h * 0.5;
    R acc{};
    for (size_t i = 0; i < kGlNodes.size(); ++i) {
      acc += kGlWeights[i] * (f(mid - half * kGlNodes[i]) + f(mid + half * kGlNodes[i]));
    }
    total += half * acc;
  }
  return total;
}

}  // namespace detail

// Integrate f over [a, b] to the given absolute tolerance by doubling the
// panel count until two successive composite rules agree.
template <class F, class R = std::invoke_result_t<F, double>>
R integrate(F&& f, double a, double b, double abs_tol, int initial_panels = 8,
            int max_panels = 1 << 16) {
  if (!(b > a)) return R{};
  int panels = initial_panels;
  R prev = detail::gl_panels<F&, R>(f, a, b, panels);
  while (panels < max_panels) {
    panels *= 2;
    R next = detail::gl_panels<F&, R>(f, a, b, panels);
    if (std::abs(next - prev) < abs_tol) return next;
    prev = next;
  }
  throw std::runtime_error("integrate: quadrature tolerance unreachable");
}

}  // namespace framekit
