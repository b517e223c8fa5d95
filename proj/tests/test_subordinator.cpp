#include <cmath>

#include <doctest.h>

#include "nht/quadrature.hpp"
#include "nht/subordinator.hpp"

using namespace nht;

namespace {

// q = 1/2 has the closed form eta_1(s) = s^{-3/2} e^{-1/(4s)} / (2 sqrt(pi)).
double half_stable_density(double s) {
  return 0.5 / std::sqrt(M_PI) * std::pow(s, -1.5) * std::exp(-0.25 / s);
}

}  // namespace

TEST_SUITE("subordinator") {
  TEST_CASE("q = 1/2 closed form") {
    QuadratureConfig cfg;
    SubordinatorSpec sub{0.5, std::nullopt};
    for (double s : {0.05, 0.3, 1.0, 4.0, 30.0}) {
      CHECK(eta_density(sub, 1.0, s, cfg) ==
            doctest::Approx(half_stable_density(s)).epsilon(2e-6));
    }
  }

  TEST_CASE("self-similar time scaling") {
    QuadratureConfig cfg;
    for (double q : {0.3, 0.75}) {
      SubordinatorSpec sub{q, std::nullopt};
      for (double t : {0.2, 3.0}) {
        double scale = std::pow(t, -1.0 / q);
        for (double s : {0.5, 2.0}) {
          CHECK(eta_density(sub, t, s, cfg) ==
                doctest::Approx(scale * eta_density(sub, 1.0, s * scale, cfg))
                    .epsilon(1e-9));
        }
      }
    }
  }

  TEST_CASE("normalization and Laplace transform") {
    QuadratureConfig cfg;
    for (double q : {0.3, 0.5, 0.75}) {
      SubordinatorSpec sub{q, std::nullopt};
      LogGaussRule rule(1e-8, 5e4, 60, 12);
      double mass = rule.apply([&](double s) { return eta_density(sub, 1.0, s, cfg); });
      // the power tail beyond the cutoff carries non-negligible mass; add the
      // first terms of its series expansion
      double S = 5e4, sign = 1.0, fact = 1.0;
      for (int k = 1; k <= 3; ++k) {
        fact *= k;
        mass += sign * std::tgamma(k * q + 1.0) / (fact * M_PI * k * q) *
                std::sin(M_PI * k * q) * std::pow(S, -k * q);
        sign = -sign;
      }
      CHECK(mass == doctest::Approx(1.0).epsilon(2e-5));
      for (double lam : {0.5, 1.0, 2.0}) {
        double lt = rule.apply(
            [&](double s) { return std::exp(-lam * s) * eta_density(sub, 1.0, s, cfg); });
        CHECK(lt == doctest::Approx(std::exp(-std::pow(lam, q))).epsilon(2e-5));
      }
    }
  }

  TEST_CASE("heavy-tail series limit") {
    QuadratureConfig cfg;
    for (double q : {0.3, 0.7}) {
      SubordinatorSpec sub{q, std::nullopt};
      double s = 2e3;
      double leading =
          std::tgamma(q + 1.0) / M_PI * std::sin(M_PI * q) * std::pow(s, -q - 1.0);
      CHECK(eta_density(sub, 1.0, s, cfg) == doctest::Approx(leading).epsilon(5e-3));
    }
  }

  TEST_CASE("left tail underflows to zero") {
    QuadratureConfig cfg;
    SubordinatorSpec sub{0.75, std::nullopt};
    bool underflow = false;
    double v = eta_density(sub, 1.0, 1e-6, cfg, &underflow);
    CHECK(v == 0.0);
    CHECK(underflow);
  }

  TEST_CASE("tempered density is a probability density") {
    QuadratureConfig cfg;
    SubordinatorSpec sub{0.5, SubordinatorSpec::Tempering{1.0, 1.0}};
    for (double t : {0.3, 1.0}) {
      LogGaussRule rule(1e-8, 2e3, 50, 12);
      double mass = rule.apply([&](double s) { return eta_density(sub, t, s, cfg); });
      CHECK(mass == doctest::Approx(1.0).epsilon(2e-5));
    }
  }

  TEST_CASE("sampler matches the Laplace transform") {
    SubordinatorSpec sub{0.75, std::nullopt};
    CounterRng rng(123);
    const size_t n = 200000;
    double lam = 1.0, sum = 0.0, sum_sq = 0.0;
    for (size_t i = 0; i < n; ++i) {
      CounterRng r = rng.fork(i);
      double v = std::exp(-lam * sample_subordinator(sub, 1.0, r));
      sum += v;
      sum_sq += v * v;
    }
    double mean = sum / n;
    double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::fabs(mean - std::exp(-1.0)) < 3.0 * se);
  }

  TEST_CASE("sampler matches the density in distribution") {
    QuadratureConfig cfg;
    SubordinatorSpec sub{0.6, std::nullopt};
    CounterRng rng(99);
    const size_t n = 100000;
    const double edges[] = {0.3, 1.0, 3.0, 10.0};
    size_t counts[4] = {0, 0, 0, 0};
    for (size_t i = 0; i < n; ++i) {
      CounterRng r = rng.fork(i);
      double s = sample_subordinator(sub, 1.0, r);
      for (int b = 0; b < 4; ++b)
        if (s <= edges[b]) ++counts[b];
    }
    for (int b = 0; b < 4; ++b) {
      // integrate each bin with its own rule so no panel straddles the edge
      LogGaussRule rule(1e-8, edges[b], 40, 12);
      double p = rule.apply([&](double s) { return eta_density(sub, 1.0, s, cfg); });
      double freq = static_cast<double>(counts[b]) / n;
      double se = std::sqrt(p * (1.0 - p) / n);
      CHECK(std::fabs(freq - p) < 4.0 * se + 1e-3);
    }
  }

  TEST_CASE("rejects invalid parameters") {
    CHECK_THROWS_AS(SubordinatorSpec({1.2, std::nullopt}).validate(), ValidationError);
    CHECK_THROWS_AS(SubordinatorSpec({0.5, SubordinatorSpec::Tempering{-1.0, 1.0}}).validate(),
                    ValidationError);
    SubordinatorSpec tempered{0.5, SubordinatorSpec::Tempering{1.0, 1.0}};
    CounterRng rng(1);
    CHECK_THROWS_AS(sample_subordinator(tempered, 1.0, rng), ValidationError);
  }

  TEST_CASE("subordinated gaussian hits the stable kernel scale") {
    SubordinatorSpec sub{0.75, std::nullopt};
    CounterRng rng(7);
    const size_t n = 50000;
    size_t inside = 0;
    for (size_t i = 0; i < n; ++i) {
      CounterRng r = rng.fork(i);
      auto x = subordinated_gaussian_sample(sub, 1.0, 1, r);
      if (std::fabs(x[0]) <= 1.0) ++inside;
    }
    // P(|X_1| <= 1) for alpha = 1.5; frozen from radial quadrature of the
    // subordination integral.
    double p_ref = 0.512684;
    double freq = static_cast<double>(inside) / n;
    CHECK(std::fabs(freq - p_ref) < 4.0 * std::sqrt(p_ref * (1 - p_ref) / n) + 1e-3);
  }
}
