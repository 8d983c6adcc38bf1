#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "framekit/verify.hpp"

using namespace framekit;
using Catch::Approx;

namespace {

GaborSystem spline_system() { return {bspline_window(8), 1.0, 0.06}; }

GaborSystem flat_dual_system() { return {ck_dual_window(8, 0.06), 1.0, 0.06}; }

}  // namespace

TEST_CASE("test functions") {
  SECTION("norm is positive and cached") {
    const TestFunction f({{1.0, 0.0, 1.0}});
    // int exp(-2x^2) = sqrt(pi/2)
    CHECK(f.l2_norm() == Approx(std::sqrt(std::sqrt(kPi / 2.0))).epsilon(1e-8));
    CHECK(f(0.0) == 1.0);
  }
  SECTION("seeded sets are reproducible") {
    const auto a = TestFunction::seeded_set();
    const auto b = TestFunction::seeded_set();
    REQUIRE(a.size() == 10);
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].bumps()[0].center == b[i].bumps()[0].center);
      CHECK(a[i].bumps()[0].width == b[i].bumps()[0].width);
      CHECK(a[i].bumps()[0].width >= 0.5);
      CHECK(a[i].bumps()[0].width <= 2.0);
      CHECK(std::abs(a[i].bumps()[0].center) <= 3.0);
    }
  }
  SECTION("empty representation is rejected") {
    CHECK_THROWS(TestFunction({}));
  }
}

TEST_CASE("multiplier-series application reproduces exact duals") {
  const TestFunction f({{1.0, 0.4, 0.9}});
  SECTION("spline pair") {
    for (double x : {-1.3, 0.0, 0.7, 2.2}) {
      const Complex y = walnut_apply(spline_system(), flat_dual_system(), f, x);
      CHECK(std::abs(y - Complex{f(x), 0.0}) < 1e-9);
    }
  }
  SECTION("orthonormal indicator lattice") {
    const GaborSystem chi{indicator_window(0.0, 1.0), 1.0, 1.0};
    for (double x : {-0.6, 0.1, 1.4}) {
      const Complex y = walnut_apply(chi, chi, f, x);
      CHECK(std::abs(y - Complex{f(x), 0.0}) < 1e-9);
    }
  }
}

TEST_CASE("expansion application reconstructs through coefficients") {
  const TestFunction f({{1.0, -0.3, 0.8}});
  SECTION("exact dual pair reconstructs under generous cutoffs") {
    const Complex y = expansion_apply(spline_system(), flat_dual_system(), f, 0.35);
    CHECK(std::abs(y - Complex{f(0.35), 0.0}) < 1e-5);
  }
  SECTION("cross-oracle agreement on the near-dual pair") {
    const GaborSystem analysis{gaussian_window(151.0 / 315.0, 1.18), 1.0, 0.06};
    const double x = 0.45;
    const Complex w = walnut_apply(analysis, flat_dual_system(), f, x);
    const Complex e = expansion_apply(analysis, flat_dual_system(), f, x);
    CHECK(std::abs(w - e) <= 1e-6 * f.l2_norm());
  }
}

TEST_CASE("empirical defects stay below certificates") {
  const auto test_set = TestFunction::seeded_set(3);
  SECTION("exact pair") {
    CHECK(empirical_defect(spline_system(), flat_dual_system(), test_set) <= 1e-8);
  }
  SECTION("near-dual pair") {
    const GaborSystem analysis{gaussian_window(151.0 / 315.0, 1.18), 1.0, 0.06};
    const double certified = walnut_defect_bound(analysis, flat_dual_system()).value;
    CHECK(empirical_defect(analysis, flat_dual_system(), test_set) <= certified);
  }
  SECTION("empty set is rejected") {
    CHECK_THROWS(empirical_defect(spline_system(), flat_dual_system(), {}));
  }
}

TEST_CASE("finite model battery") {
  SECTION("padded basis family passes for every scale") {
    for (double c : {1.0, 10.0, 100.0}) {
      const auto rep = finite_model_check(padded_basis_frame(), padded_basis_dual(c));
      CHECK(rep.all_pass());
      CHECK(frame_bounds(padded_basis_dual(c)).upper == Approx(c * c + 1.0).epsilon(1e-12));
    }
  }
  SECTION("non-transitive triple verdicts") {
    const double eps = 0.01;
    const auto f = padded_basis_frame();
    const auto h = perturbed_middle_frame(eps);
    const auto g = inverse_scaled_dual(eps);
    CHECK(approx_duality_defect(f, h) <= 1e-10);
    CHECK(approx_duality_defect(h, g) <= 1e-10);
    CHECK_FALSE(is_pseudo_dual(f, g));
    const auto rep = finite_model_check(f, g);
    CHECK(rep.all_pass());  // the battery itself must not misreport the pair
  }
  SECTION("random pairs pass the battery") {
    std::mt19937 rng(kDefaultTestSeed + 11);
    for (int trial = 0; trial < 30; ++trial) {
      const int dim = 2 + trial % 9;
      auto [f, g] = random_approx_dual_pair(rng, dim, dim + 1 + trial % 3, 0.3);
      const auto rep = finite_model_check(f, g);
      for (const auto& check : rep.checks) {
        INFO(check.name << " slack " << check.slack);
        REQUIRE(check.pass);
      }
    }
  }
}
