#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Finite-dimensional frame algebra: synthesis/analysis operators, mixed frame
// operators, optimal frame bounds, duals (canonical, natural, pseudo-inverse,
// Neumann partial sums) and the scalar perturbation-bound calculus.
//
// Inner product convention: <f,g> is linear in the first argument and
// conjugate-linear in the second, so analysis coefficients are <f, f_k>.

namespace framekit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Relative singular-value threshold separating exact rank deficiency from
// conditioning noise; scale invariant.
inline constexpr double kBijectionTol = 1e-10;
inline constexpr double kNormSelfCheckTol = 1e-10;

class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A finite family of K vectors in C^d, stored as the d x K synthesis matrix.
// Zero vectors and repeated vectors are legal members; the frame property is
// a computed predicate, not an invariant.
class FiniteFrame {
 public:
  explicit FiniteFrame(ComplexMatrix synthesis) : synthesis_(std::move(synthesis)) {
    if (synthesis_.rows() < 1 || synthesis_.cols() < 1)
      throw FrameError("FiniteFrame: need dim >= 1 and at least one vector");
    if (!synthesis_.allFinite())
      throw FrameError("FiniteFrame: entries must be finite");
  }

  static FiniteFrame from_vectors(Eigen::Index dim, const std::vector<ComplexVector>& vectors) {
    if (vectors.empty()) throw FrameError("FiniteFrame: empty vector list");
    ComplexMatrix t(dim, static_cast<Eigen::Index>(vectors.size()));
    for (Eigen::Index k = 0; k < t.cols(); ++k) {
      if (vectors[static_cast<size_t>(k)].size() != dim)
        throw FrameError("FiniteFrame: vector dimension mismatch");
      t.col(k) = vectors[static_cast<size_t>(k)];
    }
    return FiniteFrame(std::move(t));
  }

  Eigen::Index dim() const { return synthesis_.rows(); }
  Eigen::Index size() const { return synthesis_.cols(); }
  const ComplexMatrix& synthesis() const { return synthesis_; }
  ComplexVector vector(Eigen::Index k) const { return synthesis_.col(k); }

 private:
  ComplexMatrix synthesis_;
};

struct FrameBoundsEstimate {
  double lower = 0.0;  // optimal A; 0 signals "not a frame"
  double upper = 0.0;  // optimal B
  bool is_frame() const { return lower > 0.0; }
};

// Inputs to the perturbation bound: R bounds the Bessel constant of the
// difference system, C the upper frame bound of the candidate dual.
struct PerturbationData {
  double bessel_R = 0.0;
  double dual_upper_C = 0.0;
};

inline void require_matching(const FiniteFrame& f, const FiniteFrame& g) {
  if (f.dim() != g.dim() || f.size() != g.size())
    throw FrameError("frame shapes do not match");
}

// T c = sum_k c_k f_k
inline ComplexVector synthesize(const FiniteFrame& frame, const ComplexVector& coeffs) {
  if (coeffs.size() != frame.size())
    throw FrameError("synthesize: coefficient length must equal frame size");
  return frame.synthesis() * coeffs;
}

// T^* f = { <f, f_k> }
inline ComplexVector analyze(const FiniteFrame& frame, const ComplexVector& f) {
  if (f.size() != frame.dim())
    throw FrameError("analyze: vector dimension must equal frame dimension");
  return frame.synthesis().adjoint() * f;
}

// Matrix of f |-> sum_k <f, f_k> g_k, i.e. U T^* with T from the analysis
// frame and U from the synthesis frame. With both arguments equal this is the
// frame operator S = T T^*.
inline ComplexMatrix mixed_frame_operator(const FiniteFrame& analysis_frame,
                                          const FiniteFrame& synthesis_frame) {
  require_matching(analysis_frame, synthesis_frame);
  return synthesis_frame.synthesis() * analysis_frame.synthesis().adjoint();
}

inline ComplexMatrix frame_operator(const FiniteFrame& frame) {
  return mixed_frame_operator(frame, frame);
}

// Largest singular value.
inline double operator_norm(const ComplexMatrix& m) {
  if (!m.allFinite()) throw FrameError("operator_norm: non-finite entries");
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

// Optimal bounds: extreme eigenvalues of the frame operator. The lower bound
// is clamped to zero when it is indistinguishable from rank deficiency.
inline FrameBoundsEstimate frame_bounds(const FiniteFrame& frame) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(frame_operator(frame));
  const auto& ev = es.eigenvalues();
  double lo = std::max(0.0, ev(0));
  double hi = std::max(0.0, ev(ev.size() - 1));
  if (lo <= kBijectionTol * hi) lo = 0.0;
  return {lo, hi};
}

// || I - U T^* ||, with the adjoint-symmetric twin || I - T U^* || computed as
// a self-check.
inline double approx_duality_defect(const FiniteFrame& analysis_frame,
                                    const FiniteFrame& synthesis_frame) {
  require_matching(analysis_frame, synthesis_frame);
  const Eigen::Index d = analysis_frame.dim();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const double n1 = operator_norm(id - mixed_frame_operator(analysis_frame, synthesis_frame));
  const double n2 = operator_norm(id - mixed_frame_operator(synthesis_frame, analysis_frame));
  if (std::abs(n1 - n2) > kNormSelfCheckTol * std::max(1.0, n1))
    throw FrameError("approx_duality_defect: adjoint symmetry self-check failed");
  return n1;
}

// True iff the mixed frame operator is a bijection (relative singular-value
// test).
inline bool is_pseudo_dual(const FiniteFrame& f, const FiniteFrame& g, double tol = kBijectionTol) {
  if (tol <= 0.0) throw FrameError("is_pseudo_dual: tol must be positive");
  const ComplexMatrix m = mixed_frame_operator(f, g);
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  return smax > 0.0 && smin > tol * smax;
}

// { (U T^*)^{-1} g_k }: the exact dual generated by a pseudo-dual pair.
inline FiniteFrame natural_dual(const FiniteFrame& f, const FiniteFrame& g) {
  if (!is_pseudo_dual(f, g))
    throw FrameError("natural_dual: mixed frame operator is not a bijection (not pseudo-dual)");
  const ComplexMatrix m = mixed_frame_operator(f, g);
  return FiniteFrame(m.fullPivLu().solve(g.synthesis()));
}

// Canonical dual { (T T^*)^{-1} f_k }.
inline FiniteFrame canonical_dual(const FiniteFrame& frame) {
  if (!frame_bounds(frame).is_frame())
    throw FrameError("canonical_dual: not a frame (lower bound is zero)");
  const ComplexMatrix s = frame_operator(frame);
  return FiniteFrame(s.selfadjointView<Eigen::Lower>().llt().solve(frame.synthesis()));
}

// The dual whose analysis operator is the pseudo-inverse of the synthesis
// operator. Computed through an orthogonal decomposition, independently of
// canonical_dual; in finite dimensions the two coincide.
inline FiniteFrame pseudo_inverse_dual(const FiniteFrame& frame) {
  if (!frame_bounds(frame).is_frame())
    throw FrameError("pseudo_inverse_dual: not a frame (lower bound is zero)");
  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(frame.synthesis());
  const ComplexMatrix pinv = cod.pseudoInverse();  // K x d
  return FiniteFrame(pinv.adjoint());
}

// gamma_k^(N) = g_k + sum_{n=1..N} (I - U T^*)^n g_k, accumulated by explicit
// matrix powers. The returned frame's defect against f is at most
// defect(f,g)^{N+1}.
inline FiniteFrame neumann_dual_partial(const FiniteFrame& f, const FiniteFrame& g, int order) {
  if (order < 0) throw FrameError("neumann_dual_partial: order must be nonnegative");
  const double defect = approx_duality_defect(f, g);
  if (defect >= 1.0)
    throw FrameError("neumann_dual_partial: pair is not approximately dual (defect >= 1)");
  const Eigen::Index d = f.dim();
  const ComplexMatrix e = ComplexMatrix::Identity(d, d) - mixed_frame_operator(f, g);
  ComplexMatrix power = ComplexMatrix::Identity(d, d);
  ComplexMatrix acc = ComplexMatrix::Identity(d, d);
  for (int n = 1; n <= order; ++n) {
    power = power * e;
    acc += power;
  }
  return FiniteFrame(acc * g.synthesis());
}

struct SelfScalingBound {
  double scale = 0.0;  // 2/(A+B)
  double bound = 0.0;  // (B/A - 1)/(B/A + 1) < 1
};

// Every frame is approximately dual to the 2/(A+B) multiple of itself.
inline SelfScalingBound self_scaling_bound(const FrameBoundsEstimate& bounds) {
  if (!(bounds.lower > 0.0)) throw FrameError("self_scaling_bound: lower bound must be positive");
  const double ratio = bounds.upper / bounds.lower;
  return {2.0 / (bounds.lower + bounds.upper), (ratio - 1.0) / (ratio + 1.0)};
}

struct CertifiedBound {
  double value = 0.0;
  bool certified = false;  // value < 1, i.e. approximate duality established
};

// sqrt(C R): defect bound for an exact dual (with upper bound C) of a system
// R-close to the target.
inline CertifiedBound t1_bound(const PerturbationData& data) {
  if (data.bessel_R < 0.0 || data.dual_upper_C < 0.0)
    throw FrameError("t1_bound: R and C must be nonnegative");
  const double v = std::sqrt(data.dual_upper_C * data.bessel_R);
  return {v, v < 1.0};
}

struct CanonicalPerturbationBound {
  double value = 0.0;       // 1/(sqrt(A/R) - 1)
  bool certified = false;   // R < A/4
  std::optional<FrameBoundsEstimate> perturbed_bounds;  // ((sqrt A - sqrt R)^2, (sqrt B + sqrt R)^2)
};

// Defect bound when the candidate dual is the canonical dual of the perturbed
// frame. Requires R < A; certified when R < A/4.
inline CanonicalPerturbationBound c1_bound(double lower_A, double bessel_R,
                                           std::optional<double> upper_B = std::nullopt) {
  if (!(lower_A > 0.0) || !(bessel_R > 0.0))
    throw FrameError("c1_bound: need A > 0 and R > 0");
  if (bessel_R >= lower_A)
    throw FrameError("c1_bound: perturbation too large (R >= A)");
  CanonicalPerturbationBound out;
  out.value = 1.0 / (std::sqrt(lower_A / bessel_R) - 1.0);
  out.certified = bessel_R < lower_A / 4.0;
  if (upper_B) {
    const double lo = std::pow(std::sqrt(lower_A) - std::sqrt(bessel_R), 2);
    const double hi = std::pow(std::sqrt(*upper_B) + std::sqrt(bessel_R), 2);
    out.perturbed_bounds = FrameBoundsEstimate{lo, hi};
  }
  return out;
}

// Optimal R with sum_k |<f, f_k - h_k>|^2 <= R ||f||^2: the squared spectral
// norm of the difference synthesis matrix.
inline double difference_bessel_bound(const FiniteFrame& f, const FiniteFrame& h) {
  require_matching(f, h);
  const double s = operator_norm(f.synthesis() - h.synthesis());
  return s * s;
}

}  // namespace framekit
