#include <cmath>
#include <functional>

#include <doctest.h>

#include "nht/potentials.hpp"
#include "nht/quadrature.hpp"

using namespace nht;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_SUITE("potentials") {
  TEST_CASE("gaussian well closed-form norms") {
    for (int d : {1, 2}) {
      PotentialSpec V(GaussianWell{2.0, 1.5, std::vector<double>(d, 0.3)}, d);
      auto n = V.exact_norms();
      CHECK(n.l1 == doctest::Approx(2.0 * std::pow(1.5 * std::sqrt(M_PI), d)).epsilon(1e-12));
      CHECK(n.int_v == doctest::Approx(-n.l1).epsilon(1e-12));
      CHECK(n.int_v2 ==
            doctest::Approx(4.0 * std::pow(1.5 * std::sqrt(0.5 * M_PI), d)).epsilon(1e-12));
      CHECK(n.sup == 2.0);
      CHECK_FALSE(n.quadrature_used);
    }
  }

  TEST_CASE("closed-form norms match direct quadrature") {
    PotentialSpec well(GaussianWell{1.3, 0.8, {0.5}}, 1);
    PotentialSpec bump(CompactBump{0.7, 2.0, {-1.0}}, 1);
    for (const PotentialSpec* V : {&well, &bump}) {
      auto n = V->exact_norms();
      double i1 = simpson([&](double x) { return (*V)(x); }, -30.0, 30.0, 20000);
      double i2 = simpson([&](double x) { return (*V)(x) * (*V)(x); }, -30.0, 30.0, 20000);
      CHECK(n.int_v == doctest::Approx(i1).epsilon(1e-9));
      CHECK(n.int_v2 == doctest::Approx(i2).epsilon(1e-9));
    }
  }

  TEST_CASE("sum potentials fall back to box quadrature") {
    PotentialSpec V({GaussianWell{1.0, 1.0, {0.0}}, CompactBump{0.5, 1.0, {0.4}}}, 1);
    auto n = V.exact_norms();
    CHECK(n.quadrature_used);
    double i1 = simpson([&](double x) { return std::fabs(V(x)); }, -12.0, 12.0, 40000);
    double i2 = simpson([&](double x) { return V(x) * V(x); }, -12.0, 12.0, 40000);
    CHECK(n.l1 == doctest::Approx(i1).epsilon(1e-6));
    CHECK(n.int_v2 == doctest::Approx(i2).epsilon(1e-6));
    CHECK(n.sup > 0);
    CHECK(n.sup <= 1.0);
  }

  TEST_CASE("pointwise evaluation") {
    PotentialSpec V(GaussianWell{1.0, 1.0, {0.0, 0.0}}, 2);
    CHECK(V({0.0, 0.0}) == doctest::Approx(-1.0));
    CHECK(V({1.0, 1.0}) == doctest::Approx(-std::exp(-2.0)));
    PotentialSpec B(CompactBump{2.0, 1.0, {0.0}}, 1);
    CHECK(B(0.0) == doctest::Approx(2.0));
    CHECK(B(0.5) == doctest::Approx(2.0 * 0.5625));
    CHECK(B(1.5) == 0.0);
    CHECK_THROWS_AS(V({1.0}), ValidationError);
  }

  TEST_CASE("lipschitz constants") {
    PotentialSpec V(GaussianWell{3.0, 2.0, {0.0}}, 1);
    CHECK(V.lipschitz_constant() ==
          doctest::Approx(3.0 / 2.0 * std::sqrt(2.0 / M_E)).epsilon(1e-12));
    // empirical check: max slope over a fine grid never exceeds the constant
    double worst = 0.0;
    for (double x = -8.0; x < 8.0; x += 1e-3)
      worst = std::max(worst, std::fabs(V(x + 1e-3) - V(x)) / 1e-3);
    CHECK(worst <= V.lipschitz_constant() * (1 + 1e-6));
    CHECK(worst > 0.9 * V.lipschitz_constant());
  }

  TEST_CASE("holder certificate bounds increments") {
    PotentialSpec V({GaussianWell{1.0, 1.0, {0.0}}, GaussianWell{0.5, 0.6, {1.2}}}, 1);
    for (double gamma : {0.5, 1.0}) {
      double m = V.holder_certificate(gamma);
      CHECK(m > 0);
      CounterRng rng(4242);
      for (int i = 0; i < 20000; ++i) {
        double x = rng.uniform(-6.0, 6.0);
        double y = rng.uniform(-6.0, 6.0);
        if (std::fabs(x - y) < 1e-9) continue;
        CHECK(std::fabs(V(x) - V(y)) <= m * std::pow(std::fabs(x - y), gamma) * (1 + 1e-9));
      }
    }
    CHECK_THROWS_AS(V.holder_certificate(0.0), ValidationError);
    CHECK_THROWS_AS(V.holder_certificate(1.5), ValidationError);
  }

  TEST_CASE("sign classification") {
    CHECK(PotentialSpec(GaussianWell{1.0, 1.0, {0.0}}, 1).is_nonpositive());
    CHECK(PotentialSpec(CompactBump{-0.5, 1.0, {0.0}}, 1).is_nonpositive());
    CHECK_FALSE(PotentialSpec(CompactBump{0.5, 1.0, {0.0}}, 1).is_nonpositive());
    CHECK_FALSE(PotentialSpec(GaussianWell{-1.0, 1.0, {0.0}}, 1).is_nonpositive());
    PotentialSpec mixed({GaussianWell{1.0, 1.0, {0.0}}, CompactBump{0.5, 1.0, {2.0}}}, 1);
    CHECK_FALSE(mixed.is_nonpositive());
  }

  TEST_CASE("proposal moments cover the mass") {
    PotentialSpec V(GaussianWell{1.0, 1.0, {1.5}}, 1);
    CHECK(V.mass_center()[0] == doctest::Approx(1.5));
    CHECK(V.mass_scale() > 1.0);
    PotentialSpec two({GaussianWell{1.0, 1.0, {-2.0}}, GaussianWell{1.0, 1.0, {2.0}}}, 1);
    CHECK(two.mass_center()[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(two.mass_scale() > 4.0);
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(PotentialSpec(GaussianWell{1.0, 0.0, {0.0}}, 1), ValidationError);
    CHECK_THROWS_AS(PotentialSpec(CompactBump{1.0, -1.0, {0.0}}, 1), ValidationError);
    CHECK_THROWS_AS(PotentialSpec(GaussianWell{1.0, 1.0, {0.0, 0.0}}, 1), ValidationError);
    CHECK_THROWS_AS(PotentialSpec(std::vector<PotentialSpec::Shape>{}, 1), ValidationError);
  }

  TEST_CASE("json round trip") {
    PotentialSpec single(GaussianWell{1.0, 2.0, {0.5}}, 1);
    PotentialSpec multi({GaussianWell{1.0, 1.0, {0.0, 0.0}}, CompactBump{0.3, 1.0, {1.0, -1.0}}},
                        2);
    for (const PotentialSpec* V : {&single, &multi}) {
      PotentialSpec back = PotentialSpec::from_json(V->to_json());
      CHECK(back.to_json() == V->to_json());
      CHECK(back.hash() == V->hash());
    }
    CHECK(single.hash() != multi.hash());
  }

  TEST_CASE("json rejects malformed input") {
    CHECK_THROWS_AS(PotentialSpec::from_json("nope"), ValidationError);
    CHECK_THROWS_AS(PotentialSpec::from_json(R"({"shape":"gaussian_well","depth":1})"),
                    ValidationError);
    CHECK_THROWS_AS(
        PotentialSpec::from_json(
            R"({"shape":"gaussian_well","depth":1,"width":1,"center":[0],"d":1,"x":2})"),
        ValidationError);
    CHECK_THROWS_AS(
        PotentialSpec::from_json(R"({"shape":"box","height":1,"radius":1,"center":[0],"d":1})"),
        ValidationError);
  }
}
