#include <cmath>
#include <numbers>

#include "doctest.h"
#include "svj/error.hpp"
#include "svj/quadrature.hpp"

using namespace svj;

TEST_SUITE("quadrature") {
  TEST_CASE("finite interval") {
    const auto r = gk15_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.error < 1e-11);
    CHECK(r.evaluations == 15 * (2 * r.intervals - 1));
  }

  TEST_CASE("semi-infinite ranges") {
    auto gauss = [](double x) { return std::exp(-0.5 * x * x); };
    const double half = std::sqrt(std::numbers::pi / 2.0);
    CHECK(gk15_adaptive_upper_infinite(gauss, 0.0).value == doctest::Approx(half).epsilon(1e-13));
    CHECK(gk15_adaptive_lower_infinite(gauss, 0.0).value == doctest::Approx(half).epsilon(1e-13));
    CHECK(gk15_adaptive_upper_infinite([](double x) { return std::exp(-x); }, 1.0).value ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  }

  TEST_CASE("oscillatory integrand with kinks") {
    // |cos 20x| over [0, pi/2] averages 2/pi.
    const auto r = gk15_adaptive([](double x) { return std::abs(std::cos(20.0 * x)); }, 0.0,
                                 std::numbers::pi / 2.0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-11));
  }

  TEST_CASE("subdivision limit raises with the achieved estimate") {
    QuadratureConfig cfg;
    cfg.max_subdivisions = 3;
    try {
      gk15_adaptive([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); }, 0.0, 1.0, cfg);
      FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
      CHECK(e.error() > 0.0);
      CHECK(std::isfinite(e.estimate()));
      CHECK(e.estimate() == doctest::Approx(2.0 * (std::sqrt(0.3) + std::sqrt(0.7))).epsilon(0.1));
    }
  }

  TEST_CASE("bad arguments") {
    auto f = [](double x) { return x; };
    CHECK_THROWS_AS(gk15_adaptive(f, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(gk15_adaptive(f, 2.0, 1.0), DomainError);
    QuadratureConfig cfg;
    cfg.max_subdivisions = 0;
    CHECK_THROWS_AS(gk15_adaptive(f, 0.0, 1.0, cfg), DomainError);
  }
}
