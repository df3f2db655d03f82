#include <cmath>
#include <random>

#include "doctest.h"
#include "frozen_values.hpp"
#include "oracles.hpp"
#include "svj/error.hpp"
#include "svj/heston_moments.hpp"

using namespace svj;

namespace {

struct Case {
  HestonParams p;
  double T;
};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Defining integrals evaluated by the test-side Gauss-Legendre rule.
double u0_oracle(const HestonParams& p, double T) {
  auto ev = [&](double s) { return p.theta + (p.sigma0_sq - p.theta) * std::exp(-p.kappa * s); };
  auto ph = [&](double s) { return -std::expm1(-p.kappa * (T - s)) / p.kappa; };
  return 0.5 * p.rho * p.nu * oracle::integrate([&](double s) { return ev(s) * ph(s); }, 0, T, 8);
}

double r0_oracle(const HestonParams& p, double T) {
  auto ev = [&](double s) { return p.theta + (p.sigma0_sq - p.theta) * std::exp(-p.kappa * s); };
  auto ph = [&](double s) { return -std::expm1(-p.kappa * (T - s)) / p.kappa; };
  return p.nu * p.nu / 8.0 *
         oracle::integrate([&](double s) { return ev(s) * ph(s) * ph(s); }, 0, T, 8);
}

}  // namespace

TEST_SUITE("heston_moments") {
  TEST_CASE("closed forms match the defining integrals at high precision") {
    const Case cases[] = {
        {{0.25, 1.5, 0.2, 0.05, -0.2}, 0.3},
        {{0.25, 1.5, 0.2, 0.5, -0.8}, 3.0},
        {{0.04, 1e-4, 0.09, 0.3, -0.5}, 1.0},
    };
    const double v0sq[] = {frozen::kV0SqBase, frozen::kV0SqLong, frozen::kV0SqSlowKappa};
    const double u0s[] = {frozen::kU0Base, frozen::kU0Long, frozen::kU0SlowKappa};
    const double r0s[] = {frozen::kR0Base, frozen::kR0Long, frozen::kR0SlowKappa};
    for (int i = 0; i < 3; ++i) {
      const double v0 = avg_expected_variance_v0(cases[i].p, cases[i].T);
      CHECK(rel(v0 * v0, v0sq[i]) < 1e-14);
      CHECK(rel(u0(cases[i].p, cases[i].T), u0s[i]) < 1e-12);
      CHECK(rel(r0(cases[i].p, cases[i].T), r0s[i]) < 1e-12);
    }
  }

  TEST_CASE("series and closed-form branches join smoothly at kappa T = 0.5") {
    HestonParams p{0.3, 1.0, 0.1, 0.4, -0.6};
    const double below = u0(p, 0.5 * (1.0 - 1e-9));
    const double above = u0(p, 0.5 * (1.0 + 1e-9));
    CHECK(rel(below, above) < 1e-8);
    CHECK(rel(r0(p, 0.5 * (1.0 - 1e-9)), r0(p, 0.5 * (1.0 + 1e-9))) < 1e-8);
    // Both branches against the oracle right at the switch.
    for (double T : {0.49999, 0.50001}) {
      CHECK(rel(u0(p, T), u0_oracle(p, T)) < 1e-12);
      CHECK(rel(r0(p, T), r0_oracle(p, T)) < 1e-12);
    }
  }

  TEST_CASE("random parameter sets against the quadrature oracle") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      HestonParams p{0.01 + 0.5 * u(rng), std::exp(-8.0 + 11.0 * u(rng)), 0.01 + 0.5 * u(rng),
                     1e-3 + u(rng), -0.99 + 1.98 * u(rng)};
      const double T = 0.01 + 5.0 * u(rng);
      CHECK(rel(u0(p, T), u0_oracle(p, T)) < 1e-10);
      CHECK(rel(r0(p, T), r0_oracle(p, T)) < 1e-10);
    }
  }

  TEST_CASE("nu = 0 removes both corrections") {
    HestonParams p{0.2, 2.0, 0.1, 0.0, -0.5};
    CHECK(u0(p, 1.0) == 0.0);
    CHECK(r0(p, 1.0) == 0.0);
  }

  TEST_CASE("sigma0^2 = theta gives a flat expected variance") {
    HestonParams p{0.09, 3.0, 0.09, 0.2, 0.0};
    CHECK(expected_variance(p, 2.0) == doctest::Approx(0.09).epsilon(1e-15));
    CHECK(avg_expected_variance_v0(p, 1.7) == doctest::Approx(0.3).epsilon(1e-15));
  }

  TEST_CASE("phi") {
    HestonParams p{0.1, 2.0, 0.1, 0.1, 0.0};
    CHECK(phi(p, 1.0, 1.0) == 0.0);
    CHECK(phi(p, 0.0, 1.0) == doctest::Approx((1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-15));
    p.kappa = 1e-12;
    CHECK(phi(p, 0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-11));
  }

  TEST_CASE("Feller and validation") {
    CHECK(feller_satisfied({0.1, 1.0, 0.1, 0.4, 0.0}));
    CHECK_FALSE(feller_satisfied({0.1, 1.0, 0.1, 0.5, 0.0}));
    CHECK_NOTHROW(validate(HestonParams{0.1, 1.0, 0.1, 0.5, 0.0}));
    CHECK_THROWS_AS(validate(HestonParams{0.0, 1.0, 0.1, 0.1, 0.0}), DomainError);
    CHECK_THROWS_AS(validate(HestonParams{0.1, 0.0, 0.1, 0.1, 0.0}), DomainError);
    CHECK_THROWS_AS(validate(HestonParams{0.1, 1.0, -0.1, 0.1, 0.0}), DomainError);
    CHECK_THROWS_AS(validate(HestonParams{0.1, 1.0, 0.1, -0.1, 0.0}), DomainError);
    CHECK_THROWS_AS(validate(HestonParams{0.1, 1.0, 0.1, 0.1, 1.0}), DomainError);
  }
}
