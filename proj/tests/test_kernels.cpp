#include <cmath>

#include <doctest.h>

#include "nht/kernels.hpp"
#include "nht/quadrature.hpp"

using namespace nht;

namespace {

double cauchy_density(int d, double t, double r) {
  return std::tgamma(0.5 * (d + 1)) / std::pow(M_PI, 0.5 * (d + 1)) * t /
         std::pow(t * t + r * r, 0.5 * (d + 1));
}

double gauss_density(int d, double t, double r) {
  return std::pow(4.0 * M_PI * t, -0.5 * d) * std::exp(-r * r / (4.0 * t));
}

double stable_at_zero(int d, double alpha, double t) {
  return std::pow(t, -d / alpha) * sphere_area(d) * std::tgamma(d / alpha) /
         (std::pow(2.0 * M_PI, d) * alpha);
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("cauchy and gaussian closed forms across dimensions") {
    QuadratureConfig cfg;
    for (int d : {1, 2, 3}) {
      for (double t : {0.3, 1.0}) {
        for (double r = 0.0; r <= 10.0; r += 1.25) {
          CHECK(eval_kernel({Stable{1.0}, d}, t, r, cfg) ==
                doctest::Approx(cauchy_density(d, t, r)).epsilon(1e-6));
          CHECK(eval_kernel({Stable{2.0}, d}, t, r, cfg) ==
                doctest::Approx(gauss_density(d, t, r)).epsilon(1e-6));
        }
      }
    }
  }

  TEST_CASE("on-diagonal constants") {
    QuadratureConfig cfg;
    CHECK(kernel_at_zero({Stable{1.0}, 1}, 1.0, cfg) ==
          doctest::Approx(1.0 / M_PI).epsilon(1e-8));
    CHECK(kernel_at_zero({Stable{1.0}, 3}, 1.0, cfg) ==
          doctest::Approx(1.0 / (M_PI * M_PI)).epsilon(1e-8));
    CHECK(kernel_at_zero({Stable{2.0}, 1}, 1.0, cfg) ==
          doctest::Approx(std::pow(4.0 * M_PI, -0.5)).epsilon(1e-8));
    CHECK(kernel_at_zero_quadrature({Stable{1.0}, 1}, 1.0, cfg) ==
          doctest::Approx(1.0 / M_PI).epsilon(1e-5));
    CHECK(kernel_at_zero_quadrature({Stable{1.0}, 3}, 1.0, cfg) ==
          doctest::Approx(1.0 / (M_PI * M_PI)).epsilon(1e-5));
    for (double alpha : {0.6, 1.5}) {
      for (int d : {1, 2}) {
        CHECK(kernel_at_zero({Stable{alpha}, d}, 0.7, cfg) ==
              doctest::Approx(stable_at_zero(d, alpha, 0.7)).epsilon(1e-10));
        CHECK(kernel_at_zero_quadrature({Stable{alpha}, d}, 0.7, cfg) ==
              doctest::Approx(stable_at_zero(d, alpha, 0.7)).epsilon(1e-5));
      }
    }
  }

  TEST_CASE("subordination and fourier routes agree") {
    QuadratureConfig cfg;
    for (double alpha : {0.6, 1.5}) {
      for (double r : {0.0, 0.4, 2.0, 9.0}) {
        KernelSpec spec{Stable{alpha}, 1};
        if (r == 0.0) continue;
        CHECK_NOTHROW(eval_kernel(spec, 0.5, r, cfg, KernelRoute::kBoth));
      }
    }
    KernelSpec sum{StableSum{1.5, 0.8, 1.0}, 1};
    CHECK(eval_kernel(sum, 0.5, 1.0, cfg, KernelRoute::kSubordination) ==
          doctest::Approx(eval_kernel(sum, 0.5, 1.0, cfg, KernelRoute::kFourier))
              .epsilon(1e-6));
  }

  TEST_CASE("scaling identity") {
    QuadratureConfig cfg;
    for (double alpha : {0.6, 1.0, 1.5}) {
      KernelSpec spec{Stable{alpha}, 1};
      for (double t : {0.1, 0.5, 1.0}) {
        double scale = std::pow(t, -1.0 / alpha);
        for (double r : {0.3, 2.0}) {
          CHECK(eval_kernel(spec, t, r, cfg) ==
                doctest::Approx(scale * eval_kernel(spec, 1.0, r * scale, cfg))
                    .epsilon(1e-7));
        }
      }
    }
  }

  TEST_CASE("relativistic mass scaling") {
    QuadratureConfig cfg;
    double alpha = 1.2, m = 2.0, t = 0.4, r = 0.8;
    double lhs = eval_kernel({Relativistic{alpha, m}, 1}, t, r, cfg);
    double rhs = std::pow(m, 1.0 / alpha) *
                 eval_kernel({Relativistic{alpha, 1.0}, 1}, m * t,
                             std::pow(m, 1.0 / alpha) * r, cfg);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
  }

  TEST_CASE("normalization of the radial density") {
    QuadratureConfig cfg;
    for (double alpha : {0.6, 1.0, 1.5}) {
      for (int d : {1, 2}) {
        KernelEvaluator p({Stable{alpha}, d});
        LogGaussRule rule(1e-8, 1e7, 60, 12);
        double mass =
            rule.apply([&](double r) { return sphere_area(d) * std::pow(r, d - 1) * p(0.5, r); });
        // power-law tail beyond the cutoff, exponent d + alpha
        double R = 1e7;
        mass += sphere_area(d) * std::pow(R, d - 1) * p(0.5, R) * R / alpha;
        CHECK(mass == doctest::Approx(1.0).epsilon(5e-5));
      }
    }
  }

  TEST_CASE("semigroup convolution in one dimension") {
    QuadratureConfig cfg;
    QuadratureConfig loose = cfg;
    loose.rel_tol = 1e-7;
    for (double alpha : {0.6, 1.0, 1.5}) {
      KernelEvaluator p({Stable{alpha}, 1});
      double s = 0.3, t = 0.7;
      for (double r : {0.0, 1.2}) {
        double conv = integrate_upper(
                          [&](double y) { return p(s, y) * p(t, std::fabs(r - y)); }, 0.0,
                          loose) +
                      integrate_upper(
                          [&](double y) { return p(s, y) * p(t, r + y); }, 0.0, loose);
        CHECK(conv == doctest::Approx(p(s + t, r)).epsilon(5e-4));
      }
    }
  }

  TEST_CASE("sup bound and radial monotonicity") {
    for (double alpha : {0.6, 1.0, 1.5, 1.9, 1.05}) {
      KernelEvaluator p({Stable{alpha}, 1});
      for (double t : {0.1, 0.5, 1.0}) {
        double prev = p.at_zero(t);
        CHECK(prev > 0);
        for (double r = 0.05; r < 40.0; r *= 1.6) {
          double v = p(t, r);
          CHECK(v > 0);
          CHECK(v <= prev * (1.0 + 1e-9));
          prev = v;
        }
      }
    }
  }

  TEST_CASE("sum with zero weight is bitwise the stable kernel") {
    KernelEvaluator sum({StableSum{1.5, 0.8, 0.0}, 1});
    KernelEvaluator stable({Stable{1.5}, 1});
    for (double t : {0.1, 1.0}) {
      CHECK(sum.at_zero(t) == stable.at_zero(t));
      for (double r : {0.0, 0.7, 5.0, 100.0}) CHECK(sum(t, r) == stable(t, r));
    }
    QuadratureConfig cfg;
    CHECK(eval_kernel({StableSum{1.5, 0.8, 0.0}, 1}, 0.5, 1.0, cfg) ==
          eval_kernel({Stable{1.5}, 1}, 0.5, 1.0, cfg));
  }

  TEST_CASE("evaluator matches adaptive quadrature") {
    QuadratureConfig cfg;
    for (const KernelSpec& spec :
         {KernelSpec{Stable{1.5}, 1}, KernelSpec{Stable{0.7}, 2},
          KernelSpec{StableSum{1.5, 0.8, 1.0}, 1}, KernelSpec{Relativistic{1.0, 1.0}, 1}}) {
      KernelEvaluator p(spec);
      for (double t : {0.2, 0.8}) {
        for (double r : {0.0, 0.5, 3.0}) {
          double ref = r == 0.0 ? kernel_at_zero(spec, t, cfg) : eval_kernel(spec, t, r, cfg);
          CHECK(p(t, r) == doctest::Approx(ref).epsilon(5e-6));
        }
      }
    }
  }

  TEST_CASE("relativistic small-time limit recovers the stable constant") {
    QuadratureConfig cfg;
    double t = 1e-3;
    double lhs = std::exp(-t) * t * kernel_at_zero({Relativistic{1.0, 1.0}, 1}, t, cfg);
    CHECK(lhs == doctest::Approx(1.0 / M_PI).epsilon(0.01));
  }

  TEST_CASE("envelopes bracket the kernel up to a bounded constant") {
    QuadratureConfig cfg;
    for (const KernelSpec& spec :
         {KernelSpec{Stable{1.5}, 1}, KernelSpec{StableSum{1.5, 0.8, 1.0}, 1},
          KernelSpec{Relativistic{1.0, 1.0}, 1}}) {
      auto cal = calibrate_envelope(spec, cfg);
      CHECK(cal.ratio_lo > 1e-3);
      CHECK(cal.ratio_hi < 1e3);
      CHECK(cal.ratio_hi / cal.ratio_lo < 1e4);
    }
    CHECK_THROWS_AS(envelope_bounds({Relativistic{1.0, 1.0}, 1}, 2.0, 1.0), ValidationError);
    // zero-weight sum envelope must be the stable envelope exactly
    CHECK(envelope_bounds({StableSum{1.5, 0.8, 0.0}, 1}, 0.5, 1.0).upper ==
          envelope_bounds({Stable{1.5}, 1}, 0.5, 1.0).upper);
  }

  TEST_CASE("psi envelope factor") {
    QuadratureConfig cfg;
    CHECK(psi_envelope(0.0, cfg, 1, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
    double prev = 1.0;
    for (double r : {0.01, 0.1, 1.0, 5.0, 9.0, 12.0, 30.0}) {
      double tab = psi_envelope(r, cfg, 1, 1.0);
      CHECK(tab == doctest::Approx(psi_envelope_direct(r, cfg, 1, 1.0)).epsilon(1e-4));
      CHECK(tab < prev);
      prev = tab;
    }
  }

  TEST_CASE("test function transform convention") {
    QuadratureConfig cfg;
    auto tf = gaussian_test_function(0.3, 0.8);
    double xi = 0.7;
    double re = integrate_upper([&](double x) { return tf.f(x) * std::cos(xi * x); }, 0.0, cfg) +
                integrate_upper([&](double x) { return tf.f(-x) * std::cos(-xi * x); }, 0.0, cfg);
    double im = -(integrate_upper([&](double x) { return tf.f(x) * std::sin(xi * x); }, 0.0, cfg) +
                  integrate_upper([&](double x) { return tf.f(-x) * std::sin(-xi * x); }, 0.0, cfg));
    auto fh = tf.fhat(xi);
    CHECK(fh.real() == doctest::Approx(re).epsilon(1e-8));
    CHECK(fh.imag() == doctest::Approx(im).epsilon(1e-8));
  }

  TEST_CASE("generator routes are proportional with a stable constant") {
    QuadratureConfig cfg;
    for (double alpha : {0.5, 1.5}) {
      KernelSpec spec{Stable{alpha}, 1};
      auto f1 = gaussian_test_function(0.0, 1.0);
      auto f2 = gaussian_test_function(0.4, 0.7);
      auto r1 = apply_generator(spec, f1, 0.3, cfg);
      auto r2 = apply_generator(spec, f2, -0.5, cfg);
      CHECK(r1.empirical_constant ==
            doctest::Approx(r2.empirical_constant).epsilon(1e-5));
      double standard = std::pow(2.0, alpha) * std::tgamma(0.5 * (1 + alpha)) /
                        (std::sqrt(M_PI) * std::fabs(std::tgamma(-0.5 * alpha)));
      CHECK(std::fabs(r1.empirical_constant) ==
            doctest::Approx(standard).epsilon(1e-5));
    }
    // the alternative normalization has a pole at alpha = d = 1
    auto r = apply_generator({Stable{1.0}, 1}, gaussian_test_function(0.0, 1.0), 0.0, cfg);
    CHECK(std::isnan(r.pv_paper));
    CHECK(std::isfinite(r.empirical_constant));
  }
}
