#include "svj/heston_moments.hpp"

#include <cmath>

#include "svj/error.hpp"

namespace svj {

namespace {

// Below this value of kappa*T the closed-form braces of U0 and R0 are summed
// as power series in a = kappa*T; the closed forms subtract O(1) terms to get
// an O(a^2) (U0) or O(a^3) (R0) result.
constexpr double kSeriesThreshold = 0.5;
constexpr int kSeriesTerms = 40;

struct SeriesSums {
  double theta_part;
  double sigma_part;
};

// U0 = (rho nu T^2 / 2) [theta sum_{k>=3} (-1)^k (2-k) a^{k-2}/k!
//                       + sigma0^2 sum_{k>=2} (-1)^k (k-1) a^{k-2}/k!]
SeriesSums u0_series(double a) {
  SeriesSums s{0.0, 0.0};
  double term = 0.5;  // a^{k-2}/k! at k = 2
  for (int k = 2; k < kSeriesTerms; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    if (k >= 3) s.theta_part += sign * (2.0 - k) * term;
    s.sigma_part += sign * (k - 1.0) * term;
    term *= a / (k + 1.0);
  }
  return s;
}

// R0 = (nu^2 T^3 / 8) [theta sum_{k>=4} (-1)^k (2 - 2k + 2^{k-1}) a^{k-3}/k!
//                     + sigma0^2 sum_{k>=3} (-1)^k (2k - 2^k) a^{k-3}/k!]
SeriesSums r0_series(double a) {
  SeriesSums s{0.0, 0.0};
  double term = 1.0 / 6.0;  // a^{k-3}/k! at k = 3
  double pow2 = 8.0;        // 2^k
  for (int k = 3; k < kSeriesTerms; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    if (k >= 4) s.theta_part += sign * (2.0 - 2.0 * k + 0.5 * pow2) * term;
    s.sigma_part += sign * (2.0 * k - pow2) * term;
    term *= a / (k + 1.0);
    pow2 *= 2.0;
  }
  return s;
}

}  // namespace

bool feller_satisfied(const HestonParams& p) noexcept {
  return 2.0 * p.kappa * p.theta >= p.nu * p.nu;
}

void validate(const HestonParams& p) {
  if (!(p.sigma0_sq > 0.0)) throw DomainError("heston: sigma0_sq must be positive");
  if (!(p.kappa > 0.0)) throw DomainError("heston: kappa must be positive");
  if (!(p.theta > 0.0)) throw DomainError("heston: theta must be positive");
  if (!(p.nu >= 0.0)) throw DomainError("heston: nu must be non-negative");
  if (!(p.rho > -1.0 && p.rho < 1.0)) throw DomainError("heston: rho must lie in (-1, 1)");
}

double expected_variance(const HestonParams& p, double s) noexcept {
  return p.theta + (p.sigma0_sq - p.theta) * std::exp(-p.kappa * s);
}

double avg_expected_variance_v0(const HestonParams& p, double maturity) noexcept {
  const double a = p.kappa * maturity;
  // (1 - e^{-a}) / a, accurate as a -> 0
  const double decay = (a == 0.0) ? 1.0 : -std::expm1(-a) / a;
  return std::sqrt(p.theta + (p.sigma0_sq - p.theta) * decay);
}

double phi(const HestonParams& p, double t, double maturity) noexcept {
  const double tau = maturity - t;
  const double a = p.kappa * tau;
  if (a < 1e-6) return tau * (1.0 - a / 2.0 + a * a / 6.0 - a * a * a / 24.0);
  return -std::expm1(-a) / p.kappa;
}

double u0(const HestonParams& p, double maturity) noexcept {
  const double T = maturity;
  const double k = p.kappa;
  const double a = k * T;
  if (a < kSeriesThreshold) {
    const auto s = u0_series(a);
    return 0.5 * p.rho * p.nu * T * T * (p.theta * s.theta_part + p.sigma0_sq * s.sigma_part);
  }
  const double e = std::exp(-a);
  const double brace = p.theta * a - 2.0 * p.theta + p.sigma0_sq + e * (2.0 * p.theta - p.sigma0_sq) -
                       a * e * (p.sigma0_sq - p.theta);
  return p.rho * p.nu / (2.0 * k * k) * brace;
}

double r0(const HestonParams& p, double maturity) noexcept {
  const double T = maturity;
  const double k = p.kappa;
  const double a = k * T;
  if (a < kSeriesThreshold) {
    const auto s = r0_series(a);
    return p.nu * p.nu * T * T * T / 8.0 * (p.theta * s.theta_part + p.sigma0_sq * s.sigma_part);
  }
  const double e = std::exp(-a);
  const double e2 = std::exp(-2.0 * a);
  const double dv = p.sigma0_sq - p.theta;
  const double brace = p.theta * T + dv / k * (1.0 - e) - 2.0 * p.theta / k * (1.0 - e) -
                       2.0 * dv * T * e + p.theta / (2.0 * k) * (1.0 - e2) + dv / k * (e - e2);
  return p.nu * p.nu / (8.0 * k * k) * brace;
}

}  // namespace svj
