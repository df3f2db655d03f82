#pragma once

// Closed-form moments of the Heston (CIR) variance process that drive the
// decomposition: E(sigma_s^2), the average expected variance v0^2, phi(t),
// and the correction coefficients R0 (vol-of-vol) and U0 (correlation).

namespace svj {

struct HestonParams {
  double sigma0_sq = 0.0;  ///< initial instantaneous variance, > 0
  double kappa = 0.0;      ///< mean-reversion rate, > 0
  double theta = 0.0;      ///< long-run variance, > 0
  double nu = 0.0;         ///< vol-of-vol, >= 0
  double rho = 0.0;        ///< correlation in (-1, 1)
};

/// 2 kappa theta >= nu^2. A violation is reported, never rejected.
bool feller_satisfied(const HestonParams& p) noexcept;

/// Throws DomainError when sigma0_sq, kappa, theta are not positive, nu < 0
/// or |rho| >= 1.
void validate(const HestonParams& p);

double expected_variance(const HestonParams& p, double s) noexcept;

/// v0 = sqrt((1/T) int_0^T E(sigma_s^2) ds).
double avg_expected_variance_v0(const HestonParams& p, double maturity) noexcept;

/// phi(t) = int_t^T e^{-kappa (z - t)} dz = (1 - e^{-kappa (T - t)}) / kappa.
double phi(const HestonParams& p, double t, double maturity) noexcept;

/// U0 = (rho nu / 2) int_0^T E(sigma_s^2) phi(s) ds, in closed form.
double u0(const HestonParams& p, double maturity) noexcept;

/// R0 = (nu^2 / 8) int_0^T E(sigma_s^2) phi(s)^2 ds, in closed form.
double r0(const HestonParams& p, double maturity) noexcept;

}  // namespace svj
