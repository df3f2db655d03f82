#include "svj/bs_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "svj/error.hpp"

namespace svj {

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;  // 1/sqrt(2 pi)
constexpr double kDegenerateVolTime = 1e-12;

double vol_sqrt_tau(const BsInputs& in) {
  const double tau = in.tau();
  if (!(tau > 0.0)) throw DomainError("bs_kernel: time to maturity must be positive");
  if (!(in.y > 0.0)) throw DomainError("bs_kernel: volatility must be positive");
  if (!(in.strike > 0.0)) throw DomainError("bs_kernel: strike must be positive");
  return in.y * std::sqrt(tau);
}

double operator_vol_sqrt_tau(const BsInputs& in) {
  const double s = vol_sqrt_tau(in);
  if (s < kDegenerateVolTime) {
    throw DomainError("bs_kernel: y*sqrt(tau) too small for the Gamma operators");
  }
  return s;
}

double d_plus(const BsInputs& in, double s) {
  return (in.x - std::log(in.strike) + in.r * in.tau()) / s + 0.5 * s;
}

// e^x phi(d+) / (y sqrt(tau)), the common factor of every operator image.
double gamma_factor(const BsInputs& in, double s, double dp) {
  return std::exp(in.x - 0.5 * dp * dp) * kInvSqrt2Pi / s;
}

}  // namespace

double norm_pdf(double z) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double norm_cdf(double z) noexcept {
  return 0.5 * std::erfc(-z * std::numbers::sqrt2 * 0.5);
}

DPlusMinus d_plus_minus(const BsInputs& in) {
  const double s = vol_sqrt_tau(in);
  if (s == 0.0) throw DomainError("bs_kernel: y*sqrt(tau) underflows to zero");
  const double dp = d_plus(in, s);
  return {dp, dp - s};
}

double bs_price(const BsInputs& in) {
  const double s = vol_sqrt_tau(in);
  const double discounted_strike = in.strike * std::exp(-in.r * in.tau());
  if (s < kDegenerateVolTime) return std::max(std::exp(in.x) - discounted_strike, 0.0);
  const double dp = d_plus(in, s);
  return std::exp(in.x) * norm_cdf(dp) - discounted_strike * norm_cdf(dp - s);
}

double bs_vega(const BsInputs& in) {
  const double s = vol_sqrt_tau(in);
  const double dp = d_plus(in, s);
  return std::exp(in.x - 0.5 * dp * dp) * kInvSqrt2Pi * std::sqrt(in.tau());
}

double gamma_bs(const BsInputs& in) {
  const double s = operator_vol_sqrt_tau(in);
  return gamma_factor(in, s, d_plus(in, s));
}

double lambda_gamma_bs(const BsInputs& in) {
  const double s = operator_vol_sqrt_tau(in);
  const double dp = d_plus(in, s);
  return gamma_factor(in, s, dp) * (1.0 - dp / s);
}

double gamma2_bs(const BsInputs& in) {
  const double s = operator_vol_sqrt_tau(in);
  const double dp = d_plus(in, s);
  return gamma_factor(in, s, dp) * (dp * dp - s * dp - 1.0) / (s * s);
}

BsOperators bs_operators(const BsInputs& in) {
  const double s = operator_vol_sqrt_tau(in);
  const double dp = d_plus(in, s);
  const double ex = std::exp(in.x);
  const double price = ex * norm_cdf(dp) - in.strike * std::exp(-in.r * in.tau()) * norm_cdf(dp - s);
  const double g = gamma_factor(in, s, dp);
  return {price, g * (dp * dp - s * dp - 1.0) / (s * s), g * (1.0 - dp / s)};
}

}  // namespace svj
