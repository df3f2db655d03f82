#include "svj/approx_pricer.hpp"

#include <cmath>
#include <exception>
#include <string>

#include "kahan.hpp"
#include "svj/bs_kernel.hpp"
#include "svj/error.hpp"
#include "svj/parallel.hpp"

namespace svj {

namespace {

SeriesTruncation checked_truncation(const ModelParams& params, double maturity, double tol,
                                    int n_cap) {
  const auto trunc = truncate_series(params.jumps.intensity * maturity, tol);
  if (trunc.n_max > n_cap) {
    throw SeriesTruncationError("Poisson series needs " + std::to_string(trunc.n_max) +
                                " terms, above the cap of " + std::to_string(n_cap));
  }
  return trunc;
}

// G_n with the diffusion volatility given explicitly.
GnValues gn_at_vol(int n, const ModelParams& params, const Contract& c, double vol) {
  const double x = std::log(c.spot);
  if (const auto* ln = std::get_if<LogNormalJumps>(&params.jumps.shape)) {
    const auto shift = lognormal_shift(n, *ln, params.jumps.intensity, vol, params.r, c.maturity);
    // The shifted formula prices with drift r_tilde; the claim is discounted
    // at r, hence the e^{(r_tilde - r) T} factor.
    const double factor = std::exp((shift.r_tilde - params.r) * c.maturity);
    const auto ops = bs_operators({0.0, x, shift.v_tilde, c.strike, shift.r_tilde, c.maturity});
    return {factor * ops.price, factor * ops.gamma2, factor * ops.lambda_gamma};
  }
  return gn_generic(x, n, params.jumps, vol, params.r, c.strike, c.maturity);
}

}  // namespace

void validate(const ModelParams& params) {
  validate(params.heston);
  validate(params.jumps);
  if (!(params.r >= 0.0)) throw DomainError("model: rate must be >= 0");
}

void validate(const Contract& c) {
  if (!(c.spot > 0.0)) throw DomainError("contract: spot must be positive");
  if (!(c.strike > 0.0)) throw DomainError("contract: strike must be positive");
  if (!(c.maturity > 0.0)) throw DomainError("contract: maturity must be positive");
}

GnValues gn_term(int n, const ModelParams& params, const Contract& contract) {
  if (n < 0) throw DomainError("gn_term: n must be >= 0");
  const double v0 = avg_expected_variance_v0(params.heston, contract.maturity);
  return gn_at_vol(n, params, contract, v0);
}

PriceResult price_approx(const ModelParams& params, const Contract& contract, double tol,
                         int n_cap) {
  validate(params);
  validate(contract);
  const double T = contract.maturity;
  const double lambda_t = params.jumps.intensity * T;

  PriceResult out;
  out.truncation = checked_truncation(params, T, tol, n_cap);
  out.v0 = avg_expected_variance_v0(params.heston, T);
  out.r0 = r0(params.heston, T);
  out.u0 = u0(params.heston, T);
  out.feller_satisfied = feller_satisfied(params.heston);

  detail::CompensatedSum base;
  detail::CompensatedSum gamma2;
  detail::CompensatedSum lambda_gamma;
  for (int n = 0; n <= out.truncation.n_max; ++n) {
    const double weight = poisson_pmf(n, lambda_t);
    const auto gn = gn_at_vol(n, params, contract, out.v0);
    base.add(weight * gn.g);
    gamma2.add(weight * gn.gamma2_g);
    lambda_gamma.add(weight * gn.lambda_gamma_g);
  }
  out.base_term = base.value();
  out.r0_term = out.r0 * gamma2.value();
  out.u0_term = out.u0 * lambda_gamma.value();
  out.price = out.base_term + out.r0_term + out.u0_term;
  return out;
}

double jump_mixture_price(const ModelParams& params, const Contract& contract, double sigma,
                          double tol, int n_cap) {
  validate(contract);
  const double T = contract.maturity;
  const auto trunc = checked_truncation(params, T, tol, n_cap);
  const double lambda_t = params.jumps.intensity * T;
  detail::CompensatedSum sum;
  const double x = std::log(contract.spot);
  for (int n = 0; n <= trunc.n_max; ++n) {
    const double weight = poisson_pmf(n, lambda_t);
    double g = 0.0;
    if (const auto* ln = std::get_if<LogNormalJumps>(&params.jumps.shape)) {
      const auto shift = lognormal_shift(n, *ln, params.jumps.intensity, sigma, params.r, T);
      g = std::exp((shift.r_tilde - params.r) * T) *
          bs_price({0.0, x, shift.v_tilde, contract.strike, shift.r_tilde, T});
    } else {
      const double k = compensator_k(params.jumps);
      const double r_eff = params.r - params.jumps.intensity * k;
      g = std::exp(-params.jumps.intensity * k * T) *
          expect_over_jump_sum(n, params.jumps.shape, [&](double y) {
            return bs_price({0.0, x + y, sigma, contract.strike, r_eff, T});
          });
    }
    sum.add(weight * g);
  }
  return sum.value();
}

std::vector<SmileApproxRow> price_smile(const ModelParams& params, double spot,
                                        const std::vector<double>& strikes, double maturity,
                                        double tol) {
  if (strikes.empty()) throw DomainError("price_smile: strike list is empty");
  std::vector<SmileApproxRow> rows(strikes.size());
  parallel_for(strikes.size(), [&](std::size_t i) {
    rows[i].strike = strikes[i];
    try {
      rows[i].result = price_approx(params, {spot, strikes[i], maturity}, tol);
    } catch (const std::exception& e) {
      rows[i].error = e.what();
    }
  });
  return rows;
}

}  // namespace svj
