#pragma once

// Compound-Poisson jump laws: Poisson mixture weights, series truncation,
// the compensator k = E(e^Y - 1), the n-fold convolution densities of the
// jump sum J_n and the n-jump conditioned Black-Scholes quantities G_n.

#include <complex>
#include <memory>
#include <variant>
#include <vector>

#include "svj/quadrature.hpp"

namespace svj {

struct LogNormalJumps {
  double mu_j = 0.0;     ///< mean of the log-jump
  double sigma_j = 0.0;  ///< std of the log-jump, >= 0
};

struct KouJumps {
  double p = 0.5;     ///< probability of an upward jump, in [0, 1]
  double eta1 = 2.0;  ///< rate of upward jumps, > 1
  double eta2 = 2.0;  ///< rate of downward jumps, > 0
};

struct LogUniformJumps {
  double a = 0.0;  ///< lower log-jump bound
  double b = 0.0;  ///< upper log-jump bound, > a
};

using JumpShape = std::variant<LogNormalJumps, KouJumps, LogUniformJumps>;

struct JumpLaw {
  double intensity = 0.0;  ///< lambda >= 0 (per year)
  JumpShape shape = LogNormalJumps{};

  static JumpLaw none() { return {}; }
};

/// Throws DomainError on violated law invariants.
void validate(const JumpLaw& law);

/// Truncation of the Poisson series sum_{n >= 0} p_n(lambda T).
struct SeriesTruncation {
  int n_max = 0;
  double tail_mass = 0.0;  ///< 1 - sum_{n <= n_max} p_n
  double tolerance = 0.0;
};

double poisson_pmf(int n, double lambda_t) noexcept;

/// Smallest n_max whose Poisson tail mass is <= tol, tol in (0, 1).
SeriesTruncation truncate_series(double lambda_t, double tol);

/// k = E(e^Y - 1). Throws DomainError for Kou with eta1 <= 1.
double compensator_k(const JumpLaw& law);

/// E(e^{iuY}) for complex u (analytic continuation where it exists).
std::complex<double> jump_char_fn(const JumpShape& shape, std::complex<double> u);

/// Volatility and drift of the Black-Scholes formula that prices the
/// n-jump conditioned claim under log-normal jumps.
struct LognormalShift {
  double v_tilde;  ///< sqrt(v0^2 + n sigma_J^2 / T)
  double r_tilde;  ///< r + c_n
  double c_n;      ///< -lambda k + n (mu_J + sigma_J^2 / 2) / T
};

LognormalShift lognormal_shift(int n, const LogNormalJumps& law, double intensity, double v0,
                               double r, double maturity);

/// Erlang-mixture coefficients of the Kou n-fold convolution, k = 1..n
/// (index 0 unused). Stored as logarithms; -inf marks a zero coefficient.
struct KouCoefficients {
  int n = 0;
  std::vector<double> log_p;
  std::vector<double> log_q;
};

/// Cached per (n, law); safe to call concurrently.
std::shared_ptr<const KouCoefficients> kou_coefficients(int n, const KouJumps& law);

double kou_convolution_density(int n, double u, const KouJumps& law);
double loguniform_convolution_density(int n, double u, const LogUniformJumps& law);

/// Density of J_n = Y_1 + ... + Y_n for any law, n >= 1 (Gaussian for
/// log-normal jumps; a point mass at n*mu_J when sigma_J = 0 is not a density).
double jump_sum_density(int n, double u, const JumpShape& shape);

/// Quadrature settings shared by every expectation over J_n.
QuadratureConfig jump_quadrature_config();

/// E[h(J_n)] for n >= 0; n = 0 and point masses return h at the atom.
/// Propagates QuadratureError.
double expect_over_jump_sum(int n, const JumpShape& shape, const RealFunction& h,
                            const QuadratureConfig& cfg = jump_quadrature_config());

/// n-jump conditioned price G_n and its Gamma^2 / Lambda*Gamma images.
struct GnValues {
  double g;
  double gamma2_g;
  double lambda_gamma_g;
};

/// G_n(x) = e^{-lambda k T} E[BS_{r - lambda k}(x + J_n, v0)]: the discounted
/// n-jump conditioned call value when the diffusion has drift r - lambda k
/// and the payoff is discounted at the risk-free rate r.
GnValues gn_generic(double x, int n, const JumpLaw& law, double v0, double r, double strike,
                    double maturity, const QuadratureConfig& cfg = jump_quadrature_config());

}  // namespace svj
