#include "svj/implied_vol_approx.hpp"

#include <cmath>
#include <string>

#include "kahan.hpp"
#include "svj/bs_kernel.hpp"
#include "svj/error.hpp"

namespace svj {

namespace {

double d_plus(double x, double r, double sigma, double strike, double maturity) {
  const double s = sigma * std::sqrt(maturity);
  if (!(s > 0.0)) throw DomainError("d+: sigma*sqrt(T) must be positive");
  return (x - std::log(strike) + r * maturity) / s + 0.5 * s;
}

SeriesTruncation checked_truncation(const ModelParams& params, double maturity, double tol,
                                    int n_cap) {
  const auto trunc = truncate_series(params.jumps.intensity * maturity, tol);
  if (trunc.n_max > n_cap) {
    throw SeriesTruncationError("Poisson series needs " + std::to_string(trunc.n_max) +
                                " terms, above the cap of " + std::to_string(n_cap));
  }
  return trunc;
}

struct IvSetup {
  IvPoint point;
  double u0 = 0.0;
  double r0 = 0.0;
  double lambda_t = 0.0;
};

IvSetup setup(const ModelParams& params, double spot, double strike, double maturity, double tol,
              int n_cap) {
  validate(params);
  validate(Contract{spot, strike, maturity});
  IvSetup s;
  s.point.strike = strike;
  s.point.maturity = maturity;
  s.point.truncation = checked_truncation(params, maturity, tol, n_cap);
  s.point.v0 = avg_expected_variance_v0(params.heston, maturity);
  s.u0 = u0(params.heston, maturity);
  s.r0 = r0(params.heston, maturity);
  s.lambda_t = params.jumps.intensity * maturity;
  return s;
}

IvPoint finish(IvSetup& s, double sum1, double sum2) {
  s.point.i1_hat = s.u0 * sum1;
  s.point.i2_hat = s.r0 * sum2;
  s.point.iv_approx = s.point.v0 + s.point.i1_hat + s.point.i2_hat;
  s.point.negative = !(s.point.iv_approx > 0.0);
  return s.point;
}

}  // namespace

double gamma_n(double x, double jump_shift, double r_eff, double sigma, double strike,
               double maturity) {
  const double a = d_plus(x, r_eff, sigma, strike, maturity);
  const double b = d_plus(x + jump_shift, r_eff, sigma, strike, maturity);
  return 0.5 * (a - b) * (a + b);
}

double gamma_n_atm_bates(double c_n, double v_tilde, double maturity) {
  return -0.5 * (c_n * maturity + c_n * c_n * maturity / (v_tilde * v_tilde));
}

double bates_gamma_exponent(int n, const ModelParams& params, double x, double v0, double strike,
                            double maturity) {
  const auto& ln = std::get<LogNormalJumps>(params.jumps.shape);
  const double lambda = params.jumps.intensity;
  const auto shift = lognormal_shift(n, ln, lambda, v0, params.r, maturity);
  const double r_eff = params.r - lambda * compensator_k(params.jumps);
  const double a = d_plus(x, r_eff, v0, strike, maturity);
  const double b = d_plus(x, shift.r_tilde, shift.v_tilde, strike, maturity);
  return n * (ln.mu_j + 0.5 * ln.sigma_j * ln.sigma_j) + 0.5 * (a - b) * (a + b);
}

double d_b1(double x, double r_tilde, double v_tilde, double strike, double maturity,
            double gamma) {
  const double s = v_tilde * std::sqrt(maturity);
  const double d = d_plus(x, r_tilde, v_tilde, strike, maturity);
  return std::exp(gamma) / (v_tilde * maturity) * (1.0 - d / s);
}

double d_b2(double x, double r_tilde, double v_tilde, double strike, double maturity,
            double gamma) {
  const double s = v_tilde * std::sqrt(maturity);
  const double d = d_plus(x, r_tilde, v_tilde, strike, maturity);
  return std::exp(gamma) / (v_tilde * maturity) * (d * d - s * d - 1.0) / (s * s);
}

double d1_generic(double x, int n, const JumpShape& shape, double r_eff, double sigma,
                  double strike, double maturity, const QuadratureConfig& cfg) {
  const double s = sigma * std::sqrt(maturity);
  const double d0 = d_plus(x, r_eff, sigma, strike, maturity);
  return expect_over_jump_sum(
      n, shape,
      [&](double j) {
        const double d = d0 + j / s;
        const double gamma = 0.5 * (d0 - d) * (d0 + d);
        return std::exp(j + gamma) / (sigma * maturity) * (1.0 - d / s);
      },
      cfg);
}

double d2_generic(double x, int n, const JumpShape& shape, double r_eff, double sigma,
                  double strike, double maturity, const QuadratureConfig& cfg) {
  const double s = sigma * std::sqrt(maturity);
  const double d0 = d_plus(x, r_eff, sigma, strike, maturity);
  return expect_over_jump_sum(
      n, shape,
      [&](double j) {
        const double d = d0 + j / s;
        const double gamma = 0.5 * (d0 - d) * (d0 + d);
        return std::exp(j + gamma) / (sigma * s * s * maturity) * (d * d - s * d - 1.0);
      },
      cfg);
}

IvPoint iv_surface_approx(const ModelParams& params, double spot, double strike, double maturity,
                          double tol, int n_cap) {
  IvSetup s = setup(params, spot, strike, maturity, tol, n_cap);
  const double x = std::log(spot);
  const double v0 = s.point.v0;
  const double lambda = params.jumps.intensity;
  detail::CompensatedSum sum1;
  detail::CompensatedSum sum2;
  const auto* ln = std::get_if<LogNormalJumps>(&params.jumps.shape);
  const double r_eff = lambda > 0.0 ? params.r - lambda * compensator_k(params.jumps) : params.r;
  for (int n = 0; n <= s.point.truncation.n_max; ++n) {
    const double w = poisson_pmf(n, s.lambda_t);
    if (ln != nullptr) {
      const auto shift = lognormal_shift(n, *ln, lambda, v0, params.r, maturity);
      const double g = bates_gamma_exponent(n, params, x, v0, strike, maturity);
      sum1.add(w * d_b1(x, shift.r_tilde, shift.v_tilde, strike, maturity, g));
      sum2.add(w * d_b2(x, shift.r_tilde, shift.v_tilde, strike, maturity, g));
    } else {
      sum1.add(w * d1_generic(x, n, params.jumps.shape, r_eff, v0, strike, maturity));
      sum2.add(w * d2_generic(x, n, params.jumps.shape, r_eff, v0, strike, maturity));
    }
  }
  return finish(s, sum1.value(), sum2.value());
}

IvPoint iv_atm_approx(const ModelParams& params, double spot, double maturity, double tol,
                      int n_cap) {
  return iv_surface_approx(params, spot, spot, maturity, tol, n_cap);
}

IvPoint iv_atm_bates_display(const ModelParams& params, double spot, double maturity, double tol,
                             int n_cap) {
  const auto* ln = std::get_if<LogNormalJumps>(&params.jumps.shape);
  if (ln == nullptr) throw DomainError("iv_atm_bates_display: needs log-normal jumps");
  IvSetup s = setup(params, spot, spot, maturity, tol, n_cap);
  const double T = maturity;
  detail::CompensatedSum sum1;
  detail::CompensatedSum sum2;
  for (int n = 0; n <= s.point.truncation.n_max; ++n) {
    const double w = poisson_pmf(n, s.lambda_t);
    const auto shift = lognormal_shift(n, *ln, params.jumps.intensity, s.point.v0, params.r, T);
    const double v = shift.v_tilde;
    const double c = shift.c_n;
    const double e = std::exp(gamma_n_atm_bates(c, v, T)) / (v * T);
    sum1.add(w * e * (0.5 - c / (v * v)));
    sum2.add(-w * e * (0.25 + 1.0 / (v * v * T) - c * c / (v * v * v * v)));
  }
  return finish(s, sum1.value(), sum2.value());
}

IvPoint iv_atm_generic_display(const ModelParams& params, double spot, double maturity,
                               double tol, int n_cap) {
  IvSetup s = setup(params, spot, spot, maturity, tol, n_cap);
  const double T = maturity;
  const double v = s.point.v0;
  const double v2t = v * v * T;
  detail::CompensatedSum sum1;
  detail::CompensatedSum sum2;
  for (int n = 0; n <= s.point.truncation.n_max; ++n) {
    const double w = poisson_pmf(n, s.lambda_t);
    auto weight = [&](double j) { return std::exp(j - 0.5 * (j * j / v2t + j)) / (v * T); };
    sum1.add(w * expect_over_jump_sum(n, params.jumps.shape, [&](double j) {
               return weight(j) * (0.5 - j / v2t);
             }));
    sum2.add(-w * expect_over_jump_sum(n, params.jumps.shape, [&](double j) {
               return weight(j) * (0.25 + 1.0 / v2t - j * j / (v2t * v2t));
             }));
  }
  return finish(s, sum1.value(), sum2.value());
}

}  // namespace svj
