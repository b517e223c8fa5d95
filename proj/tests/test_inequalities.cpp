#include <cmath>
#include <vector>

#include <doctest.h>

#include "nht/inequalities.hpp"
#include "nht/kernels.hpp"

using namespace nht;

namespace {

std::vector<double> radial_grid(double r_max, int n) {
  std::vector<double> g;
  for (int i = 0; i <= n; ++i) g.push_back(r_max * i / n);
  return g;
}

}  // namespace

TEST_SUITE("inequalities") {
  TEST_CASE("midpoint ratio hits the scaling value on the diagonal") {
    QuadratureConfig cfg;
    // at s = t/2 and x = 0 the ratio is p_{t/2}(0) / p_t(0) = 2^{d/alpha}
    for (int d : {1, 2}) {
      KernelSpec spec{Stable{1.5}, d};
      auto w = check_3p(spec, 0.4, 0.2, {0.0}, cfg);
      CHECK(w.max_ratio == doctest::Approx(std::pow(2.0, d / 1.5)).epsilon(1e-8));
      CHECK(w.argmax_radius == 0.0);
      auto v = check_5p(spec, 0.4, 0.2, {0.0}, cfg);
      CHECK(v.max_ratio ==
            doctest::Approx(0.5 * std::pow(2.0, d / 1.5)).epsilon(1e-8));
    }
  }

  TEST_CASE("ratios are stable under grid refinement") {
    QuadratureConfig cfg;
    for (const KernelSpec& spec :
         {KernelSpec{Stable{1.2}, 1}, KernelSpec{StableSum{1.5, 0.8, 1.0}, 1},
          KernelSpec{Relativistic{1.0, 1.0}, 1}}) {
      for (double s : {0.1, 0.2, 0.3}) {
        auto coarse3 = check_3p(spec, 0.4, s, radial_grid(8.0, 64), cfg);
        auto fine3 = check_3p(spec, 0.4, s, radial_grid(8.0, 128), cfg);
        CHECK(std::fabs(fine3.max_ratio - coarse3.max_ratio) <
              0.01 * coarse3.max_ratio);
        auto coarse5 = check_5p(spec, 0.4, s, radial_grid(8.0, 64), cfg);
        auto fine5 = check_5p(spec, 0.4, s, radial_grid(8.0, 128), cfg);
        CHECK(std::fabs(fine5.max_ratio - coarse5.max_ratio) <
              0.01 * coarse5.max_ratio);
        CHECK(fine5.max_ratio < fine3.max_ratio);
      }
    }
  }

  TEST_CASE("ratio profile decays away from the origin") {
    QuadratureConfig cfg;
    KernelSpec spec{Stable{1.2}, 1};
    auto near = check_3p(spec, 0.4, 0.2, {0.0}, cfg);
    auto far = check_3p(spec, 0.4, 0.2, {25.0}, cfg);
    CHECK(far.max_ratio < 0.05 * near.max_ratio);
  }

  TEST_CASE("scaling covariance of the midpoint ratio") {
    QuadratureConfig cfg;
    double alpha = 1.4, lambda = 3.0, t = 0.3;
    KernelSpec spec{Stable{alpha}, 1};
    std::vector<double> g = radial_grid(4.0, 40);
    std::vector<double> g_scaled;
    for (double r : g) g_scaled.push_back(std::pow(lambda, 1.0 / alpha) * r);
    auto a = check_3p(spec, t, 0.4 * t, g, cfg);
    auto b = check_3p(spec, lambda * t, 0.4 * lambda * t, g_scaled, cfg);
    CHECK(a.max_ratio == doctest::Approx(b.max_ratio).epsilon(1e-7));
  }

  TEST_CASE("ratio input validation") {
    QuadratureConfig cfg;
    KernelSpec spec{Stable{1.2}, 1};
    CHECK_THROWS_AS(check_3p(spec, 0.4, 0.4, {0.0}, cfg), ValidationError);
    CHECK_THROWS_AS(check_3p(spec, 0.4, 0.0, {0.0}, cfg), ValidationError);
    CHECK_THROWS_AS(check_5p(spec, 0.4, -0.1, {0.0}, cfg), ValidationError);
    CHECK_THROWS_AS(check_3p(spec, 0.4, 0.2, {}, cfg), ValidationError);
    KernelSpec rel{Relativistic{1.0, 1.0}, 1};
    CHECK_THROWS_AS(check_3p(rel, 2.0, 1.0, {0.0}, cfg), ValidationError);
    CHECK_NOTHROW(check_3p(rel, 1.0, 0.5, {0.0}, cfg));
  }

  TEST_CASE("scalar exponential bounds") {
    // frozen spot check at a = -1, b = 1:
    //   -a = 1 <= e - 1 = 1.71828... <= -a (1 + b e^b / 2) = 2.35914...
    double lhs = 1.0, mid = std::exp(1.0) - 1.0, rhs = 1.0 + 0.5 * std::exp(1.0);
    CHECK(lhs <= mid);
    CHECK(mid <= rhs);
    CHECK(mid == doctest::Approx(1.718281828459045).epsilon(1e-14));

    std::vector<double> a_grid, b_grid;
    for (int i = 0; i <= 200; ++i) a_grid.push_back(-5.0 + 5.0 * i / 200.0);
    for (int j = 0; j <= 100; ++j) b_grid.push_back(5.0 * j / 100.0);
    auto res = check_scalar_inequality(a_grid, b_grid);
    CHECK(res.points_checked == a_grid.size() * b_grid.size());
    CHECK(res.violations == 0);
    CHECK(res.worst_margin >= 0.0);
  }

  TEST_CASE("fractional moment closed-form value") {
    QuadratureConfig cfg;
    // E|X_1|^{1/2} at alpha = 1 in d = 1 equals sqrt(2)
    auto m = check_fractional_moment(1.0, 0.5, 1, cfg);
    REQUIRE(m.finite);
    CHECK(m.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4 / std::sqrt(2.0)));
  }

  TEST_CASE("fractional moment small-order limit") {
    QuadratureConfig cfg;
    auto m = check_fractional_moment(1.5, 0.01, 1, cfg);
    REQUIRE(m.finite);
    CHECK(m.value == doctest::Approx(1.0).epsilon(0.05));
  }

  TEST_CASE("moment diverges at the tail index") {
    QuadratureConfig cfg;
    auto m = check_fractional_moment(1.0, 1.0, 1, cfg);
    CHECK_FALSE(m.finite);
    CHECK(m.growth_ratio >= 0.97);
    auto m2 = check_fractional_moment(1.5, 1.8, 1, cfg);
    CHECK_FALSE(m2.finite);
  }

  TEST_CASE("relativistic tails carry all moments") {
    QuadratureConfig cfg;
    KernelSpec rel{Relativistic{1.0, 1.0}, 1};
    auto m = fractional_moment(rel, 3.0, cfg);
    REQUIRE(m.finite);
    CHECK(m.value > 0);
    CHECK(m.growth_ratio < 0.97);
    // order below the index: finite for the plain stable family too, and
    // tempering can only shrink the tail mass
    auto stable = fractional_moment({Stable{1.0}, 1}, 0.5, cfg);
    auto rel_half = fractional_moment(rel, 0.5, cfg);
    REQUIRE(stable.finite);
    REQUIRE(rel_half.finite);
    CHECK(rel_half.value < stable.value);
  }

  TEST_CASE("moment validation") {
    QuadratureConfig cfg;
    CHECK_THROWS_AS(fractional_moment({Stable{1.0}, 1}, -0.5, cfg), ValidationError);
  }
}
