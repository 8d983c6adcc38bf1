#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "framekit/frame.hpp"
#include "framekit/gabor.hpp"
#include "framekit/policy.hpp"
#include "framekit/quadrature.hpp"
#include "framekit/window.hpp"

// Independent oracles: the mixed Gabor frame operator applied two different
// ways (multiplier series vs truncated frame expansion), empirical
// reconstruction defects, and a finite-dimensional invariant battery.

namespace framekit {

inline constexpr unsigned kDefaultTestSeed = 0x5EED;

// Finite combination of Gaussian bumps; evaluable anywhere, with a cached
// L2 norm.
class TestFunction {
 public:
  struct Bump {
    double amplitude = 1.0;
    double center = 0.0;
    double width = 1.0;
  };

  explicit TestFunction(std::vector<Bump> bumps) : bumps_(std::move(bumps)) {
    if (bumps_.empty()) throw std::invalid_argument("TestFunction: empty representation");
    norm_ = std::sqrt(integrate(
        [this](double x) {
          const double v = (*this)(x);
          return v * v;
        },
        -effective_radius(1e-14), effective_radius(1e-14), 1e-12, 64));
    if (!(norm_ > 0.0)) throw std::invalid_argument("TestFunction: zero norm");
  }

  double operator()(double x) const {
    double s = 0.0;
    for (const auto& t : bumps_) {
      const double u = (x - t.center) / t.width;
      s += t.amplitude * std::exp(-u * u);
    }
    return s;
  }

  double l2_norm() const { return norm_; }

  double effective_radius(double tol) const {
    double r = 0.0;
    for (const auto& t : bumps_) {
      const double amp = std::abs(t.amplitude);
      const double reach = amp > tol ? t.width * std::sqrt(std::log(amp / tol)) : 0.0;
      r = std::max(r, std::abs(t.center) + reach);
    }
    return r;
  }

  const std::vector<Bump>& bumps() const { return bumps_; }

  // Deterministic default test set: unit Gaussians with widths in [0.5, 2]
  // and centers in [-3, 3].
  static std::vector<TestFunction> seeded_set(int count = 10, unsigned seed = kDefaultTestSeed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> width(0.5, 2.0);
    std::uniform_real_distribution<double> center(-3.0, 3.0);
    std::vector<TestFunction> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) out.emplace_back(std::vector<Bump>{{1.0, center(rng), width(rng)}});
    return out;
  }

 private:
  std::vector<Bump> bumps_;
  double norm_ = 0.0;
};

// (U T^* f)(x) through the multiplier series
//   (1/b) sum_n [sum_k phi(x - n/b - a k) g(x - a k)] f(x - n/b).
inline Complex walnut_apply(const GaborSystem& analysis, const GaborSystem& synthesis,
                            const TestFunction& f, double x, const TruncationPolicy& pol = {}) {
  detail::require_same_lattice(analysis, synthesis);
  pol.validate();
  const double a = analysis.a;
  const double b = analysis.b;
  const auto range = detail::active_shift_range(analysis.window, synthesis.window, a, b, pol);
  double acc = 0.0;
  for (int n = range.nmin; n <= range.nmax; ++n) {
    const double shift = static_cast<double>(n) / b;
    const double w = lattice_cross_sum(analysis.window, synthesis.window, a, shift, x, pol);
    if (w != 0.0) acc += w * f(x - shift);
  }
  return Complex{acc / b, 0.0};
}

// Truncated frame expansion sum_{|m|<=M, |n|<=N} <f, E_mb T_na phi>
// (E_mb T_na g)(x), coefficients by certified quadrature.
inline Complex expansion_apply(const GaborSystem& analysis, const GaborSystem& synthesis,
                               const TestFunction& f, double x, const TruncationPolicy& pol = {}) {
  detail::require_same_lattice(analysis, synthesis);
  pol.validate();
  const Window& phi = analysis.window;
  const Window& g = synthesis.window;
  const double a = analysis.a;
  const double b = analysis.b;
  const double rf = f.effective_radius(1e-13);
  const Interval iphi = phi.effective_interval(pol.k_tail_tol);

  auto coefficient = [&](int m, int n) -> Complex {
    const double lo = std::max(-rf, iphi.lo + n * a);
    const double hi = std::min(rf, iphi.hi + n * a);
    if (!(hi > lo)) return {0.0, 0.0};
    const int panels = std::max(8, static_cast<int>(std::ceil((hi - lo) * std::abs(m) * b * 4.0)) + 8);
    return integrate(
        [&](double t) -> Complex {
          return f(t) * phi(t - n * a) * std::polar(1.0, -2.0 * kPi * m * b * t);
        },
        lo, hi, pol.quadrature_abs_tol, panels);
  };

  Complex acc{0.0, 0.0};
  for (int n = -pol.lattice_cutoff_n; n <= pol.lattice_cutoff_n; ++n) {
    const double gv = g(x - n * a);
    if (gv == 0.0) continue;
    for (int m = 0; m <= pol.lattice_cutoff_m; ++m) {
      const Complex c = coefficient(m, n);
      acc += c * std::polar(1.0, 2.0 * kPi * m * b * x) * gv;
      if (m > 0) acc += std::conj(c) * std::polar(1.0, -2.0 * kPi * m * b * x) * gv;
    }
  }
  return acc;
}

// max over the test set of ||f - U T^* f|| / ||f||, norms by quadrature over
// the effective support. A lower bound on ||I - U T^*||.
inline double empirical_defect(const GaborSystem& analysis, const GaborSystem& synthesis,
                               const std::vector<TestFunction>& test_set,
                               const TruncationPolicy& pol = {}) {
  if (test_set.empty()) throw std::invalid_argument("empirical_defect: empty test set");
  double worst = 0.0;
  for (const auto& f : test_set) {
    const double radius = f.effective_radius(1e-13) + 2.0;
    const double err = std::sqrt(integrate(
        [&](double x) {
          const double d = f(x) - walnut_apply(analysis, synthesis, f, x, pol).real();
          return d * d;
        },
        -radius, radius, 1e-14, 64));
    worst = std::max(worst, err / f.l2_norm());
  }
  return worst;
}

// ---- Finite-dimensional invariant battery -------------------------------

struct CheckResult {
  std::string name;
  bool pass = false;
  double slack = 0.0;  // margin by which the inequality held (negative: failed)
};

struct FiniteModelReport {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Runs the frame-algebra consistency checks on a pair of finite families.
inline FiniteModelReport finite_model_check(const FiniteFrame& f, const FiniteFrame& g) {
  FiniteModelReport rep;
  auto add = [&](std::string name, bool pass, double slack) {
    rep.checks.push_back({std::move(name), pass, slack});
  };

  const auto fb = frame_bounds(f);
  const bool self_pseudo = is_pseudo_dual(f, f);
  add("frame-predicate-matches-operator-bijectivity", fb.is_frame() == self_pseudo, 0.0);

  bool canonical_ok = true;
  try {
    const FiniteFrame cd = canonical_dual(f);
    const double defect = approx_duality_defect(f, cd);
    add("canonical-dual-defect", defect <= 1e-10, 1e-10 - defect);
    const auto cb = frame_bounds(cd);
    // canonical dual bounds are the reciprocals of the frame bounds
    const double s1 = cb.lower - 1.0 / fb.upper + 1e-9;
    const double s2 = 1.0 / fb.lower - cb.upper + 1e-9;
    add("canonical-dual-reciprocal-bounds", s1 >= 0.0 && s2 >= 0.0, std::min(s1, s2));
  } catch (const FrameError&) {
    canonical_ok = false;
  }
  add("canonical-dual-exists-iff-frame", canonical_ok == fb.is_frame(), 0.0);

  if (fb.is_frame()) {
    const auto ss = self_scaling_bound(fb);
    const Eigen::Index d = f.dim();
    const double lhs = operator_norm(ComplexMatrix::Identity(d, d) -
                                     ss.scale * frame_operator(f));
    add("self-scaling-bound", lhs <= ss.bound + 1e-9, ss.bound + 1e-9 - lhs);
  }

  const double defect = approx_duality_defect(f, g);
  const bool pseudo = is_pseudo_dual(f, g);
  if (defect < 1.0) {
    add("approx-dual-implies-pseudo-dual", pseudo, 1.0 - defect);
    for (int order = 1; order <= 3; ++order) {
      const FiniteFrame z = neumann_dual_partial(f, g, order);
      const double zd = approx_duality_defect(f, z);
      const double bound = std::pow(defect, order + 1) + 1e-9;
      add("neumann-partial-sum-defect-N" + std::to_string(order), zd <= bound, bound - zd);
    }
  }
  if (pseudo) {
    add("pseudo-dual-pair-members-are-frames",
        frame_bounds(f).is_frame() && frame_bounds(g).is_frame(), 0.0);
    const double nd = approx_duality_defect(f, natural_dual(f, g));
    add("natural-dual-defect", nd <= 1e-10, 1e-10 - nd);
  }
  return rep;
}

// ---- Seeded random families for property suites -------------------------

inline FiniteFrame random_frame(std::mt19937& rng, int dim, int count, double sigma = 1.0) {
  std::normal_distribution<double> dist(0.0, sigma);
  ComplexMatrix t(dim, count);
  for (int j = 0; j < count; ++j)
    for (int i = 0; i < dim; ++i) t(i, j) = Complex{dist(rng), dist(rng)};
  return FiniteFrame(std::move(t));
}

// A frame together with a noisy copy of its canonical dual whose duality
// defect is strictly below one.
inline std::pair<FiniteFrame, FiniteFrame> random_approx_dual_pair(std::mt19937& rng, int dim,
                                                                   int count, double noise) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const FiniteFrame f = random_frame(rng, dim, count);
    if (!frame_bounds(f).is_frame()) continue;
    const FiniteFrame dual = canonical_dual(f);
    double level = noise;
    for (int shrink = 0; shrink < 32; ++shrink) {
      const FiniteFrame g(dual.synthesis() +
                          level * random_frame(rng, dim, count).synthesis());
      if (approx_duality_defect(f, g) < 0.9) return {f, g};
      level *= 0.5;
    }
  }
  throw FrameError("random_approx_dual_pair: could not build a pair");
}

// ---- Reference finite families ------------------------------------------

// {0, e1, e2} in C^2: a frame with optimal bounds A = B = 1.
inline FiniteFrame padded_basis_frame() {
  ComplexMatrix t = ComplexMatrix::Zero(2, 3);
  t(0, 1) = 1.0;
  t(1, 2) = 1.0;
  return FiniteFrame(std::move(t));
}

// {C e1, e1, e2}: an exact dual of padded_basis_frame for every C, with upper
// bound C^2 + 1.
inline FiniteFrame padded_basis_dual(double c) {
  ComplexMatrix t = ComplexMatrix::Zero(2, 3);
  t(0, 0) = c;
  t(0, 1) = 1.0;
  t(1, 2) = 1.0;
  return FiniteFrame(std::move(t));
}

// {eps e1, e1, e2}: close to padded_basis_frame and dual to it.
inline FiniteFrame perturbed_middle_frame(double eps) { return padded_basis_dual(eps); }

// {eps^{-1} e1, 0, e2}: dual to perturbed_middle_frame but not pseudo-dual to
// padded_basis_frame.
inline FiniteFrame inverse_scaled_dual(double eps) {
  ComplexMatrix t = ComplexMatrix::Zero(2, 3);
  t(0, 0) = 1.0 / eps;
  t(1, 2) = 1.0;
  return FiniteFrame(std::move(t));
}

}  // namespace framekit
