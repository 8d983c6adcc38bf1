#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "framekit/frame.hpp"
#include "framekit/verify.hpp"

using namespace framekit;
using Catch::Approx;

namespace {

FiniteFrame basis2() {
  return FiniteFrame(ComplexMatrix::Identity(2, 2));
}

FiniteFrame repeated_first() {
  // {e1, e1, e2}
  ComplexMatrix t = ComplexMatrix::Zero(2, 3);
  t(0, 0) = 1.0;
  t(0, 1) = 1.0;
  t(1, 2) = 1.0;
  return FiniteFrame(std::move(t));
}

ComplexVector vec2(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  return v;
}

ComplexVector vec3(Complex a, Complex b, Complex c) {
  ComplexVector v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("synthesis") {
  SECTION("zero member contributes nothing") {
    const auto out = synthesize(padded_basis_frame(), vec3(5.0, 1.0, 2.0));
    CHECK(out(0) == Complex{1.0, 0.0});
    CHECK(out(1) == Complex{2.0, 0.0});
  }
  SECTION("zero coefficients give the zero vector") {
    const auto out = synthesize(repeated_first(), vec3(0.0, 0.0, 0.0));
    CHECK(out.norm() == 0.0);
  }
  SECTION("repeated vectors add") {
    const auto out = synthesize(repeated_first(), vec3(1.0, 1.0, 0.0));
    CHECK(out(0) == Complex{2.0, 0.0});
    CHECK(out(1) == Complex{0.0, 0.0});
  }
  SECTION("length mismatch throws") {
    CHECK_THROWS_AS(synthesize(basis2(), vec3(1.0, 0.0, 0.0)), FrameError);
  }
}

TEST_CASE("analysis") {
  SECTION("padded basis") {
    const auto c = analyze(padded_basis_frame(), vec2(1.0, 0.0));
    CHECK(c(0) == Complex{0.0, 0.0});
    CHECK(c(1) == Complex{1.0, 0.0});
    CHECK(c(2) == Complex{0.0, 0.0});
  }
  SECTION("orthonormal basis gives coordinates") {
    const auto c = analyze(basis2(), vec2({1.0, 2.0}, {3.0, -1.0}));
    CHECK(c(0) == Complex{1.0, 2.0});
    CHECK(c(1) == Complex{3.0, -1.0});
  }
  SECTION("repeated vectors") {
    const auto c = analyze(repeated_first(), vec2(1.0, 1.0));
    CHECK(c(0) == Complex{1.0, 0.0});
    CHECK(c(1) == Complex{1.0, 0.0});
    CHECK(c(2) == Complex{1.0, 0.0});
  }
  SECTION("dimension mismatch throws") {
    CHECK_THROWS_AS(analyze(basis2(), vec3(1.0, 0.0, 0.0)), FrameError);
  }
}

TEST_CASE("mixed frame operator") {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  SECTION("orthonormal basis gives identity") {
    CHECK((mixed_frame_operator(basis2(), basis2()) - id).norm() == 0.0);
  }
  SECTION("padded dual pair gives identity for every scale") {
    for (double c : {1.0, 10.0, 100.0}) {
      CHECK((mixed_frame_operator(padded_basis_frame(), padded_basis_dual(c)) - id).norm() ==
            Approx(0.0).margin(1e-14));
    }
  }
  SECTION("defective pair gives a rank-one projector") {
    const ComplexMatrix m =
        mixed_frame_operator(padded_basis_frame(), inverse_scaled_dual(0.5));
    CHECK(std::abs(m(0, 0)) == 0.0);
    CHECK(std::abs(m(1, 1) - Complex{1.0, 0.0}) == 0.0);
    CHECK(std::abs(m(0, 1)) + std::abs(m(1, 0)) == 0.0);
  }
  SECTION("shape mismatch throws") {
    CHECK_THROWS_AS(mixed_frame_operator(basis2(), repeated_first()), FrameError);
  }
}

TEST_CASE("operator norm") {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  CHECK(operator_norm(m) == Approx(1.0).epsilon(1e-10));
  m(0, 0) = 0.5;
  CHECK(operator_norm(m) == Approx(1.0).epsilon(1e-10));
  m(0, 0) = 2.0;
  CHECK(operator_norm(m) == Approx(2.0).epsilon(1e-10));
}

TEST_CASE("frame bounds") {
  SECTION("padded basis is tight with bounds one") {
    const auto b = frame_bounds(padded_basis_frame());
    CHECK(b.lower == Approx(1.0).epsilon(1e-12));
    CHECK(b.upper == Approx(1.0).epsilon(1e-12));
  }
  SECTION("padded dual upper bound grows as c^2 + 1") {
    const auto b = frame_bounds(padded_basis_dual(2.0));
    CHECK(b.upper == Approx(5.0).epsilon(1e-12));
  }
  SECTION("repeated vector doubles the upper bound") {
    const auto b = frame_bounds(repeated_first());
    CHECK(b.lower == Approx(1.0).epsilon(1e-12));
    CHECK(b.upper == Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("approximate duality defect") {
  SECTION("exact dual pairs have zero defect") {
    CHECK(approx_duality_defect(padded_basis_frame(), padded_basis_dual(3.0)) ==
          Approx(0.0).margin(1e-12));
    CHECK(approx_duality_defect(basis2(), basis2()) == Approx(0.0).margin(1e-14));
  }
  SECTION("halved first vector") {
    ComplexMatrix t = ComplexMatrix::Identity(2, 2);
    t(0, 0) = 0.5;
    CHECK(approx_duality_defect(basis2(), FiniteFrame(t)) == Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("pseudo-dual predicate") {
  SECTION("rank-deficient mixed operator is rejected") {
    CHECK_FALSE(is_pseudo_dual(padded_basis_frame(), inverse_scaled_dual(0.5)));
  }
  SECTION("orthonormal basis with itself") {
    CHECK(is_pseudo_dual(basis2(), basis2()));
  }
  SECTION("coordinate swap is a bijection") {
    ComplexMatrix t = ComplexMatrix::Zero(2, 2);
    t(1, 0) = 1.0;
    t(0, 1) = 1.0;
    CHECK(is_pseudo_dual(basis2(), FiniteFrame(t)));
  }
  SECTION("nonpositive tolerance throws") {
    CHECK_THROWS_AS(is_pseudo_dual(basis2(), basis2(), 0.0), FrameError);
  }
}

TEST_CASE("natural dual") {
  SECTION("orthonormal basis is self-dual") {
    const auto d = natural_dual(basis2(), basis2());
    CHECK((d.synthesis() - ComplexMatrix::Identity(2, 2)).norm() == Approx(0.0).margin(1e-14));
  }
  SECTION("repeated vector gets halved") {
    const auto d = natural_dual(repeated_first(), repeated_first());
    CHECK(std::abs(d.synthesis()(0, 0) - Complex{0.5, 0.0}) < 1e-14);
    CHECK(std::abs(d.synthesis()(0, 1) - Complex{0.5, 0.0}) < 1e-14);
    CHECK(std::abs(d.synthesis()(1, 2) - Complex{1.0, 0.0}) < 1e-14);
  }
  SECTION("already-dual family is returned unchanged") {
    const auto g = padded_basis_dual(7.0);
    const auto d = natural_dual(padded_basis_frame(), g);
    CHECK((d.synthesis() - g.synthesis()).norm() == Approx(0.0).margin(1e-12));
  }
  SECTION("non-bijective pair throws") {
    CHECK_THROWS_AS(natural_dual(padded_basis_frame(), inverse_scaled_dual(0.5)), FrameError);
  }
}

TEST_CASE("canonical dual") {
  SECTION("orthonormal basis") {
    const auto d = canonical_dual(basis2());
    CHECK((d.synthesis() - ComplexMatrix::Identity(2, 2)).norm() < 1e-14);
  }
  SECTION("repeated vector") {
    const auto d = canonical_dual(repeated_first());
    CHECK(std::abs(d.synthesis()(0, 0) - Complex{0.5, 0.0}) < 1e-14);
  }
  SECTION("zero member is fixed") {
    const auto d = canonical_dual(padded_basis_frame());
    CHECK((d.synthesis() - padded_basis_frame().synthesis()).norm() < 1e-14);
  }
  SECTION("rank-deficient family throws") {
    ComplexMatrix t = ComplexMatrix::Zero(2, 2);
    t(0, 0) = 1.0;
    t(0, 1) = 1.0;
    CHECK_THROWS_AS(canonical_dual(FiniteFrame(t)), FrameError);
  }
}

TEST_CASE("pseudo-inverse dual") {
  SECTION("matches hand values") {
    const auto d = pseudo_inverse_dual(repeated_first());
    CHECK(std::abs(d.synthesis()(0, 0) - Complex{0.5, 0.0}) < 1e-12);
    CHECK(std::abs(d.synthesis()(0, 1) - Complex{0.5, 0.0}) < 1e-12);
    CHECK(std::abs(d.synthesis()(1, 2) - Complex{1.0, 0.0}) < 1e-12);
  }
  SECTION("fixed points") {
    CHECK((pseudo_inverse_dual(basis2()).synthesis() - ComplexMatrix::Identity(2, 2)).norm() <
          1e-12);
    CHECK((pseudo_inverse_dual(padded_basis_frame()).synthesis() -
           padded_basis_frame().synthesis())
              .norm() < 1e-12);
  }
  SECTION("coincides with the canonical dual on random frames") {
    std::mt19937 rng(kDefaultTestSeed);
    for (int trial = 0; trial < 25; ++trial) {
      const auto f = random_frame(rng, 2 + trial % 5, 4 + trial % 4);
      if (!frame_bounds(f).is_frame()) continue;
      const auto a = canonical_dual(f);
      const auto b = pseudo_inverse_dual(f);
      CHECK((a.synthesis() - b.synthesis()).norm() <
            1e-10 * std::max(1.0, a.synthesis().norm()));
    }
  }
}

TEST_CASE("partial Neumann duals") {
  SECTION("order zero returns the input") {
    const auto g = padded_basis_dual(0.3);
    const auto z = neumann_dual_partial(padded_basis_frame(), g, 0);
    CHECK((z.synthesis() - g.synthesis()).norm() == 0.0);
  }
  SECTION("exact duals are fixed points at every order") {
    const auto g = padded_basis_dual(2.0);
    for (int order : {1, 2, 5}) {
      const auto z = neumann_dual_partial(padded_basis_frame(), g, order);
      CHECK((z.synthesis() - g.synthesis()).norm() < 1e-12);
    }
  }
  SECTION("one correction step against a halved vector") {
    ComplexMatrix t = ComplexMatrix::Identity(2, 2);
    t(0, 0) = 0.5;
    const FiniteFrame g(t);
    const auto z = neumann_dual_partial(basis2(), g, 1);
    CHECK(std::abs(z.synthesis()(0, 0) - Complex{0.75, 0.0}) < 1e-14);
    CHECK(approx_duality_defect(basis2(), z) == Approx(0.25).epsilon(1e-12));
  }
  SECTION("defect at or above one throws") {
    ComplexMatrix t = ComplexMatrix::Identity(2, 2);
    t *= 3.0;
    CHECK_THROWS_AS(neumann_dual_partial(basis2(), FiniteFrame(t), 1), FrameError);
  }
}

TEST_CASE("self-scaling bound") {
  const auto s = self_scaling_bound({2.6, 10.1});
  CHECK(s.scale == Approx(2.0 / 12.7).epsilon(1e-12));
  CHECK(s.bound == Approx(0.59).margin(0.005));
  CHECK(self_scaling_bound({3.0, 3.0}).bound == 0.0);
  CHECK(self_scaling_bound({1.0, 2.0}).bound == Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(self_scaling_bound({0.0, 1.0}), FrameError);
}

TEST_CASE("square-root perturbation bound") {
  const auto t = t1_bound({0.0006, 1.0});
  CHECK(t.value == Approx(std::sqrt(0.0006)).epsilon(1e-12));
  CHECK(t.value <= 0.025);
  CHECK(t.certified);
  CHECK(t1_bound({0.0, 5.0}).value == 0.0);
  const auto boundary = t1_bound({0.25, 4.0});
  CHECK(boundary.value == Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(boundary.certified);
}

TEST_CASE("canonical perturbation bound") {
  SECTION("small perturbation is certified") {
    const auto c = c1_bound(2.6, 6.5e-4);
    CHECK(c.value == Approx(1.0 / (std::sqrt(2.6 / 6.5e-4) - 1.0)).epsilon(1e-12));
    // exact formula value; rounds to the published two-figure 0.016
    CHECK(c.value <= 0.0165);
    CHECK(c.certified);
  }
  SECTION("quarter boundary is exactly one and uncertified") {
    const auto c = c1_bound(4.0, 1.0);
    CHECK(c.value == Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(c.certified);
  }
  SECTION("perturbed bounds") {
    const auto c = c1_bound(4.0, 1.0, 9.0);
    REQUIRE(c.perturbed_bounds.has_value());
    CHECK(c.perturbed_bounds->lower == Approx(1.0).epsilon(1e-12));
    CHECK(c.perturbed_bounds->upper == Approx(16.0).epsilon(1e-12));
  }
  SECTION("oversized perturbation throws") {
    CHECK_THROWS_AS(c1_bound(1.0, 2.0), FrameError);
  }
}

TEST_CASE("difference Bessel bound") {
  SECTION("identical families give zero") {
    CHECK(difference_bessel_bound(repeated_first(), repeated_first()) == 0.0);
  }
  SECTION("scaled basis vector gives epsilon squared") {
    CHECK(difference_bessel_bound(padded_basis_frame(), perturbed_middle_frame(0.1)) ==
          Approx(0.01).epsilon(1e-12));
  }
  SECTION("agrees with a sphere-search oracle") {
    std::mt19937 rng(kDefaultTestSeed + 1);
    const auto f = random_frame(rng, 3, 5);
    const auto h = random_frame(rng, 3, 5);
    const double r = difference_bessel_bound(f, h);

    // Independent oracle: best of 1e4 random unit vectors, polished by power
    // iteration on D D^H (no singular value decomposition involved).
    const ComplexMatrix d = f.synthesis() - h.synthesis();
    std::normal_distribution<double> dist;
    ComplexVector best = ComplexVector::Zero(3);
    double best_val = 0.0;
    for (int i = 0; i < 10000; ++i) {
      ComplexVector v(3);
      for (int j = 0; j < 3; ++j) v(j) = Complex{dist(rng), dist(rng)};
      v.normalize();
      const double val = (d.adjoint() * v).squaredNorm();
      if (val > best_val) {
        best_val = val;
        best = v;
      }
    }
    const ComplexMatrix dd = d * d.adjoint();
    for (int i = 0; i < 64; ++i) best = (dd * best).normalized();
    const double oracle = (d.adjoint() * best).squaredNorm();
    CHECK(r == Approx(oracle).margin(1e-3));
  }
}

TEST_CASE("adjoint symmetry of the defect") {
  std::mt19937 rng(kDefaultTestSeed + 2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_frame(rng, 3, 5);
    const auto g = random_frame(rng, 3, 5);
    const Eigen::Index d = f.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    const double n1 = operator_norm(id - mixed_frame_operator(f, g));
    const double n2 = operator_norm(id - mixed_frame_operator(g, f));
    CHECK(n1 == Approx(n2).margin(1e-10));
  }
}

TEST_CASE("pseudo-duality is preserved by invertible reshaping") {
  std::mt19937 rng(kDefaultTestSeed + 3);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 2 + trial % 4;
    auto [f, g] = random_approx_dual_pair(rng, dim, dim + 2, 0.2);
    REQUIRE(is_pseudo_dual(f, g));
    // small contraction plus identity: invertible by the Neumann criterion
    ComplexMatrix w = 0.1 * random_frame(rng, dim, dim).synthesis() +
                      ComplexMatrix::Identity(dim, dim);
    REQUIRE(operator_norm(w - ComplexMatrix::Identity(dim, dim)) < 1.0);
    CHECK(is_pseudo_dual(f, FiniteFrame(w * g.synthesis())));
  }
}

TEST_CASE("random-pair inequality battery") {
  std::mt19937 rng(kDefaultTestSeed + 4);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 2 + trial % 9;
    auto [f, g] = random_approx_dual_pair(rng, dim, dim + 1 + trial % 3, 0.3);
    const double defect = approx_duality_defect(f, g);
    REQUIRE(defect < 1.0);

    // partial-sum improvement
    for (int order : {1, 2, 3}) {
      const double zd = approx_duality_defect(f, neumann_dual_partial(f, g, order));
      CHECK(zd <= std::pow(defect, order + 1) + 1e-9);
    }

    // self-scaled copy
    const auto fb = frame_bounds(f);
    const auto ss = self_scaling_bound(fb);
    const ComplexMatrix id = ComplexMatrix::Identity(f.dim(), f.dim());
    CHECK(operator_norm(id - ss.scale * frame_operator(f)) <= ss.bound + 1e-9);

    // exact dual of a nearby family
    const FiniteFrame h(f.synthesis() +
                        0.05 * random_frame(rng, dim, static_cast<int>(f.size())).synthesis());
    if (frame_bounds(h).is_frame()) {
      const auto gd = canonical_dual(h);
      const double c = frame_bounds(gd).upper;
      const double r = difference_bessel_bound(f, h);
      CHECK(approx_duality_defect(f, gd) <= std::sqrt(c * r) + 1e-9);

      // perturbed families keep sandwiched optimal bounds
      if (r < fb.lower) {
        const auto hb = frame_bounds(h);
        CHECK(hb.lower >= std::pow(std::sqrt(fb.lower) - std::sqrt(r), 2) - 1e-9);
        CHECK(hb.upper <= std::pow(std::sqrt(fb.upper) + std::sqrt(r), 2) + 1e-9);
      }
    }

    // bijective pairs produce exact duals
    if (is_pseudo_dual(f, g)) {
      CHECK(approx_duality_defect(f, natural_dual(f, g)) <= 1e-10);
    }
  }
}

TEST_CASE("exact duals respect the reciprocal lower bound") {
  std::mt19937 rng(kDefaultTestSeed + 5);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + trial % 5;
    const auto f = random_frame(rng, dim, dim + 2);
    if (!frame_bounds(f).is_frame()) continue;
    const auto g = canonical_dual(f);
    CHECK(frame_bounds(g).lower >= 1.0 / frame_bounds(f).upper - 1e-9);
  }
}

TEST_CASE("pseudo-duality is not transitive") {
  const double eps = 0.5;
  const auto f = padded_basis_frame();
  const auto h = perturbed_middle_frame(eps);
  const auto g = inverse_scaled_dual(eps);
  CHECK(approx_duality_defect(f, h) <= 1e-10);
  CHECK(approx_duality_defect(h, g) <= 1e-10);
  CHECK(is_pseudo_dual(f, h));
  CHECK(is_pseudo_dual(h, g));
  CHECK_FALSE(is_pseudo_dual(f, g));
}
