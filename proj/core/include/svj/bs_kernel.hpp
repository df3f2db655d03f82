#pragma once

// Black-Scholes call price in log-spot coordinates and the differential
// operators Gamma = (d2/dx2 - d/dx), Lambda*Gamma and Gamma^2 applied to it.

namespace svj {

/// Inputs of the Black-Scholes call in log-spot coordinates.
struct BsInputs {
  double t = 0.0;         ///< valuation time (years)
  double x = 0.0;         ///< log spot price
  double y = 0.0;         ///< volatility, > 0
  double strike = 0.0;    ///< K > 0
  double r = 0.0;         ///< rate used both as drift and for discounting
  double maturity = 0.0;  ///< T > t

  double tau() const noexcept { return maturity - t; }
};

struct DPlusMinus {
  double plus;
  double minus;
};

double norm_pdf(double z) noexcept;

/// Standard normal CDF via erfc; saturates to 0/1 in the tails.
double norm_cdf(double z) noexcept;

/// Throws DomainError if y*sqrt(tau) is not strictly positive.
DPlusMinus d_plus_minus(const BsInputs& in);

/// e^x Phi(d+) - K e^{-r tau} Phi(d-). For y*sqrt(tau) < 1e-12 returns the
/// intrinsic value max(e^x - K e^{-r tau}, 0).
double bs_price(const BsInputs& in);

/// Vega dBS/dy = e^x phi(d+) sqrt(tau).
double bs_vega(const BsInputs& in);

// The three operators throw DomainError when y*sqrt(tau) < 1e-12.
double gamma_bs(const BsInputs& in);
double lambda_gamma_bs(const BsInputs& in);
double gamma2_bs(const BsInputs& in);

/// All three operator images from a single d+ evaluation.
struct BsOperators {
  double price;
  double gamma2;
  double lambda_gamma;
};
BsOperators bs_operators(const BsInputs& in);

}  // namespace svj
