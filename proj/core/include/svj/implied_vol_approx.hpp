#pragma once

// First-order implied volatility surface of the decomposition:
//
//   I(T, K) ~ v0 + U0 sum_n p_n D1_n + R0 sum_n p_n D2_n
//
// where D1_n, D2_n are the Lambda*Gamma and Gamma^2 images of G_n divided by
// the vega of the n = 0 term. Log-normal jumps use closed forms, other laws
// take expectations over the jump sum J_n.

#include "svj/approx_pricer.hpp"

namespace svj {

struct IvPoint {
  double strike = 0.0;
  double maturity = 0.0;
  double iv_approx = 0.0;  ///< v0 + i1_hat + i2_hat
  double i1_hat = 0.0;     ///< correlation (U0) contribution
  double i2_hat = 0.0;     ///< vol-of-vol (R0) contribution
  double v0 = 0.0;
  bool negative = false;   ///< iv_approx <= 0: outside the validity region, not clamped
  SeriesTruncation truncation;
};

/// (d+^2(x, r_eff, sigma) - d+^2(x + jump_shift, r_eff, sigma)) / 2.
double gamma_n(double x, double jump_shift, double r_eff, double sigma, double strike,
               double maturity);

/// -(c_n T + c_n^2 T / v_tilde^2) / 2: the exponent used by the spot-ATM
/// log-normal display. It is an approximation of the exact exponent, see
/// bates_gamma_exponent.
double gamma_n_atm_bates(double c_n, double v_tilde, double maturity);

/// Exact exponent of the log-normal closed forms:
/// n (mu_J + sigma_J^2 / 2) + (d+^2(x, r - lambda k, v0) - d+^2(x, r_tilde, v_tilde)) / 2.
double bates_gamma_exponent(int n, const ModelParams& params, double x, double v0, double strike,
                            double maturity);

/// e^gamma / (v T) (1 - d+ / (v sqrt T)), d+ = d+(x, r_tilde, v_tilde).
double d_b1(double x, double r_tilde, double v_tilde, double strike, double maturity,
            double gamma);

/// e^gamma / (v T) (d+^2 - v sqrt(T) d+ - 1) / (v^2 T).
double d_b2(double x, double r_tilde, double v_tilde, double strike, double maturity,
            double gamma);

/// E over J_n of e^{J + gamma} / (sigma T) (1 - d+(x + J) / (sigma sqrt T)).
double d1_generic(double x, int n, const JumpShape& shape, double r_eff, double sigma,
                  double strike, double maturity,
                  const QuadratureConfig& cfg = jump_quadrature_config());

/// E over J_n of e^{J + gamma} / (sigma^3 T^2) (d+^2 - sigma sqrt(T) d+ - 1).
double d2_generic(double x, int n, const JumpShape& shape, double r_eff, double sigma,
                  double strike, double maturity,
                  const QuadratureConfig& cfg = jump_quadrature_config());

/// Approximate implied volatility at (K, T) for spot S0. It is measured
/// against the jump-diffusion with the model's jump law (the plain
/// Black-Scholes implied volatility when lambda = 0); compare with
/// implied_vol_invert_jump_adjusted. Throws SeriesTruncationError.
IvPoint iv_surface_approx(const ModelParams& params, double spot, double strike, double maturity,
                          double tol = kDefaultSeriesTolerance, int n_cap = kMaxSeriesTerms);

/// Spot-ATM curve: iv_surface_approx at K = S0.
IvPoint iv_atm_approx(const ModelParams& params, double spot, double maturity,
                      double tol = kDefaultSeriesTolerance, int n_cap = kMaxSeriesTerms);

/// Spot-ATM log-normal display with c_n and gamma_n_atm_bates. Agrees with
/// iv_atm_approx only up to the exponent approximation (exactly when
/// lambda = 0 and r = 0).
IvPoint iv_atm_bates_display(const ModelParams& params, double spot, double maturity,
                             double tol = kDefaultSeriesTolerance, int n_cap = kMaxSeriesTerms);

/// Spot-ATM generic display, expectations over J_n of the polynomial
/// brackets in J. Exact when r - lambda k = 0.
IvPoint iv_atm_generic_display(const ModelParams& params, double spot, double maturity,
                               double tol = kDefaultSeriesTolerance,
                               int n_cap = kMaxSeriesTerms);

}  // namespace svj
