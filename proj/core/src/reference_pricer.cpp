#include "svj/reference_pricer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "svj/bs_kernel.hpp"
#include "svj/error.hpp"

namespace svj {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI(0.0, 1.0);

// log(1 + z) without losing the digits of small |z|.
Complex log1p_complex(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  return {0.5 * std::log1p(2.0 * x + x * x + y * y), std::atan2(y, 1.0 + x)};
}

// Heston part of ln E[exp(iu (X_T - x0 - (r - lambda k) T))], written so
// that nu -> 0 is free of 0/0: (beta - d)/nu^2 = -(iu + u^2)/(beta + d).
Complex heston_log_char(Complex u, const HestonParams& h, double T) {
  const double nu2 = h.nu * h.nu;
  const Complex iu = kI * u;
  const Complex beta = h.kappa - h.rho * h.nu * iu;
  const Complex d = std::sqrt(beta * beta + nu2 * (iu + u * u));
  const Complex a = -(iu + u * u) / (beta + d);  // (beta - d) / nu^2
  const Complex g_over_nu2 = a / (beta + d);
  const Complex g = g_over_nu2 * nu2;  // (beta - d) / (beta + d)
  const Complex e = std::exp(-d * T);
  Complex log_ratio_over_nu2;  // ln((1 - g e) / (1 - g)) / nu^2
  if (std::abs(g) < 1e-6) {
    log_ratio_over_nu2 =
        g_over_nu2 * ((1.0 - e) + g * (1.0 - e * e) / 2.0 + g * g * (1.0 - e * e * e) / 3.0);
  } else {
    log_ratio_over_nu2 = (log1p_complex(-g * e) - log1p_complex(-g)) / nu2;
  }
  const Complex c = h.kappa * h.theta * (a * T - 2.0 * log_ratio_over_nu2);
  const Complex dterm = a * (1.0 - e) / (1.0 - g * e);
  return c + dterm * h.sigma0_sq;
}

double check_no_arbitrage(double price, const Contract& c, double r) {
  const double lower = std::max(c.spot - c.strike * std::exp(-r * c.maturity), 0.0);
  return std::clamp(price, lower, c.spot);
}

// Secant iteration on a sign-changing bracket, falling back to bisection
// whenever the secant point leaves the bracket or fails to halve it.
double bracketed_root(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                      double f_hi) {
  double prev_width = hi - lo;
  for (int iter = 0; iter < 200; ++iter) {
    double x = hi - f_hi * (hi - lo) / (f_hi - f_lo);
    const double mid = 0.5 * (lo + hi);
    if (!(x > lo && x < hi)) x = mid;
    if (hi - lo > 0.5 * prev_width) x = mid;
    prev_width = hi - lo;
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
      f_hi = fx;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
}

double invert(const std::function<double(double)>& price_at, double price, const Contract& c,
              double r) {
  validate(c);
  const double intrinsic = std::max(c.spot - c.strike * std::exp(-r * c.maturity), 0.0);
  if (!(price > intrinsic && price < c.spot)) {
    throw NoSolutionError("implied vol: price outside the no-arbitrage interval (intrinsic, spot)");
  }
  auto f = [&](double sigma) { return price_at(sigma) - price; };
  const double f_lo = f(kIvLowerBound);
  const double f_hi = f(kIvUpperBound);
  if (f_lo > 0.0 || f_hi < 0.0) {
    throw NoSolutionError("implied vol: no solution inside [1e-6, 10]");
  }
  if (f_lo == 0.0) return kIvLowerBound;
  if (f_hi == 0.0) return kIvUpperBound;
  return bracketed_root(f, kIvLowerBound, kIvUpperBound, f_lo, f_hi);
}

}  // namespace

std::complex<double> bates_char_fn(std::complex<double> u, const ModelParams& params,
                                   double maturity) {
  const double lambda = params.jumps.intensity;
  Complex log_phi = heston_log_char(u, params.heston, maturity);
  if (lambda > 0.0) {
    const double k = compensator_k(params.jumps);
    log_phi += lambda * maturity * (jump_char_fn(params.jumps.shape, u) - 1.0) -
               kI * u * (lambda * k * maturity);
  }
  return std::exp(log_phi);
}

QuadratureConfig reference_quadrature_config() {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-12;
  cfg.rel_tol = 1e-12;
  cfg.max_subdivisions = 2000;
  return cfg;
}

double price_reference(const ModelParams& params, const Contract& contract,
                       const QuadratureConfig& cfg, ReferenceMethod method) {
  validate(params);
  validate(contract);
  const double S = contract.spot;
  const double K = contract.strike;
  const double T = contract.maturity;
  const double r = params.r;
  const double k = std::log(S / K) + r * T;

  if (method == ReferenceMethod::OneIntegral) {
    auto integrand = [&](double u) {
      const Complex z = std::exp(kI * u * k) * bates_char_fn(Complex(u, -0.5), params, T);
      return z.real() / (u * u + 0.25);
    };
    const double integral = gk15_adaptive_upper_infinite(integrand, 0.0, cfg).value;
    const double price = S - std::sqrt(S * K) * std::exp(-0.5 * r * T) / std::numbers::pi * integral;
    return check_no_arbitrage(price, contract, r);
  }

  auto probability = [&](Complex shift) {
    auto integrand = [&](double u) {
      const Complex z = std::exp(kI * u * k) * bates_char_fn(Complex(u, 0.0) + shift, params, T);
      return (z / (kI * u)).real();
    };
    return 0.5 + gk15_adaptive_upper_infinite(integrand, 0.0, cfg).value / std::numbers::pi;
  };
  const double p1 = probability(Complex(0.0, -1.0));
  const double p2 = probability(Complex(0.0, 0.0));
  return check_no_arbitrage(S * p1 - K * std::exp(-r * T) * p2, contract, r);
}

double price_reference_put(const ModelParams& params, const Contract& contract,
                           const QuadratureConfig& cfg) {
  validate(params);
  validate(contract);
  const double S = contract.spot;
  const double K = contract.strike;
  const double T = contract.maturity;
  const double k = std::log(S / K) + params.r * T;
  // complementary probabilities 1 - P_j = 1/2 - (1/pi) int Re[...]
  auto complement = [&](Complex shift) {
    auto integrand = [&](double u) {
      const Complex z = std::exp(kI * u * k) * bates_char_fn(Complex(u, 0.0) + shift, params, T);
      return (z / (kI * u)).real();
    };
    return 0.5 - gk15_adaptive_upper_infinite(integrand, 0.0, cfg).value / std::numbers::pi;
  };
  const double q1 = complement(Complex(0.0, -1.0));
  const double q2 = complement(Complex(0.0, 0.0));
  return std::max(K * std::exp(-params.r * T) * q2 - S * q1, 0.0);
}

double implied_vol_invert(double price, const Contract& contract, double r) {
  const double x = std::log(contract.spot);
  return invert(
      [&](double sigma) {
        return bs_price({0.0, x, sigma, contract.strike, r, contract.maturity});
      },
      price, contract, r);
}

double implied_vol_invert_jump_adjusted(double price, const Contract& contract,
                                        const ModelParams& params) {
  if (params.jumps.intensity == 0.0) return implied_vol_invert(price, contract, params.r);
  return invert(
      [&](double sigma) { return jump_mixture_price(params, contract, sigma); }, price, contract,
      params.r);
}

}  // namespace svj
