#pragma once

// Fourier-transform reference prices for the Bates-type model: Heston
// characteristic function (branch-cut-safe form) times the compound-Poisson
// jump factor, integrated with adaptive GK15. Also implied volatility inversion.

#include <complex>

#include "svj/approx_pricer.hpp"
#include "svj/quadrature.hpp"

namespace svj {

/// E[exp(iu (X_T - x0 - rT))]; u may be complex. phi(0) = 1, phi(-i) = 1.
std::complex<double> bates_char_fn(std::complex<double> u, const ModelParams& params,
                                   double maturity);

enum class ReferenceMethod {
  OneIntegral,  ///< single integral along Im(u) = -1/2
  TwoIntegral,  ///< C = S0 P1 - K e^{-rT} P2, two separate integrals
};

/// Defaults targeting ~1e-12 absolute integration error.
QuadratureConfig reference_quadrature_config();

/// Call price. Propagates QuadratureError with the achieved error estimate.
double price_reference(const ModelParams& params, const Contract& contract,
                       const QuadratureConfig& cfg = reference_quadrature_config(),
                       ReferenceMethod method = ReferenceMethod::OneIntegral);

/// Put price from the complementary probabilities of the two-integral form.
double price_reference_put(const ModelParams& params, const Contract& contract,
                           const QuadratureConfig& cfg = reference_quadrature_config());

inline constexpr double kIvLowerBound = 1e-6;
inline constexpr double kIvUpperBound = 10.0;

/// Black-Scholes implied volatility in [1e-6, 10]. Throws NoSolutionError
/// when the price is outside (intrinsic, spot) or the bracket.
double implied_vol_invert(double price, const Contract& contract, double r);

/// Volatility sigma solving jump_mixture_price(params, contract, sigma) = price:
/// the implied volatility measured against the jump-diffusion with the
/// model's jump law instead of plain Black-Scholes. Identical to
/// implied_vol_invert when the intensity is zero.
double implied_vol_invert_jump_adjusted(double price, const Contract& contract,
                                        const ModelParams& params);

}  // namespace svj
