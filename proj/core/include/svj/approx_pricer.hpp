#pragma once

// Poisson-weighted decomposition approximation of a European call under a
// Heston-type model with compound-Poisson jumps in the log-price:
//
//   V0 ~ sum_n p_n(lambda T) [ G_n + Gamma^2 G_n * R0 + Lambda Gamma G_n * U0 ]
//
// with every G_n evaluated at the average expected volatility v0.

#include <optional>
#include <string>
#include <vector>

#include "svj/heston_moments.hpp"
#include "svj/jump_laws.hpp"

namespace svj {

struct ModelParams {
  HestonParams heston;
  JumpLaw jumps;
  double r = 0.0;  ///< risk-free rate, >= 0
};

/// Throws DomainError on violated parameter invariants.
void validate(const ModelParams& params);

/// European call.
struct Contract {
  double spot = 100.0;
  double strike = 100.0;
  double maturity = 1.0;
};

void validate(const Contract& contract);

inline constexpr double kDefaultSeriesTolerance = 1e-12;
inline constexpr int kMaxSeriesTerms = 200;

struct PriceResult {
  double price = 0.0;       ///< base_term + r0_term + u0_term
  double base_term = 0.0;   ///< sum p_n G_n
  double r0_term = 0.0;     ///< R0 * sum p_n Gamma^2 G_n
  double u0_term = 0.0;     ///< U0 * sum p_n Lambda Gamma G_n
  SeriesTruncation truncation;
  double v0 = 0.0;
  double r0 = 0.0;
  double u0 = 0.0;
  bool feller_satisfied = true;
};

/// G_n and its operator images at (x0 = ln S0, v0). Log-normal jumps use the
/// shifted Black-Scholes closed form, other laws integrate against J_n.
GnValues gn_term(int n, const ModelParams& params, const Contract& contract);

/// Throws SeriesTruncationError when the series needs more than n_cap terms.
PriceResult price_approx(const ModelParams& params, const Contract& contract,
                         double tol = kDefaultSeriesTolerance, int n_cap = kMaxSeriesTerms);

/// Jump-diffusion price sum_n p_n G_n with the diffusion volatility fixed at
/// sigma (no stochastic-volatility corrections). With no jumps this is the
/// Black-Scholes price.
double jump_mixture_price(const ModelParams& params, const Contract& contract, double sigma,
                          double tol = kDefaultSeriesTolerance, int n_cap = kMaxSeriesTerms);

struct SmileApproxRow {
  double strike = 0.0;
  std::optional<PriceResult> result;
  std::string error;  ///< set when result is empty
};

/// One price_approx per strike, evaluated in parallel; per-strike failures are
/// collected in the row instead of aborting the batch. Throws DomainError on
/// an empty strike list.
std::vector<SmileApproxRow> price_smile(const ModelParams& params, double spot,
                                        const std::vector<double>& strikes, double maturity,
                                        double tol = kDefaultSeriesTolerance);

}  // namespace svj
