#pragma once

// Monte Carlo pricing of the jump-diffusion with CIR variance. Euler steps
// for the variance (full truncation or reflection), the orthogonal Brownian
// part integrated in one exact Gaussian draw per path, and compound-Poisson
// jumps sampled exactly (Poisson count, then i.i.d. amplitudes).
//
// Paths are grouped in fixed blocks of kMcBlockSize sample units, each with
// its own generator seeded from (seed, block index), so results do not
// depend on the number of worker threads.

#include <cstdint>
#include <vector>

#include "svj/approx_pricer.hpp"

namespace svj {

enum class VarianceScheme { FullTruncation, Reflection };

inline constexpr std::int64_t kMcBlockSize = 4096;

struct McConfig {
  std::int64_t n_paths = 100000;  ///< sample units; antithetic pairs count once
  int n_steps = 0;                ///< 0 picks default_steps(T)
  std::uint64_t seed = 42;
  bool antithetic = false;
  VarianceScheme scheme = VarianceScheme::FullTruncation;
  int threads = 0;          ///< 0 = worker_count()
  double drift_bias = 0.0;  ///< added to the log-price drift; debugging only
};

/// Throws DomainError unless n_paths >= 2 and n_steps >= 0.
void validate(const McConfig& cfg);

/// 300 steps per year, and at least 300.
int default_steps(double maturity);

struct McResult {
  double value = 0.0;      ///< sample mean
  double std_error = 0.0;  ///< sample std / sqrt(n)
  std::int64_t n_samples = 0;
};

/// Terminal log-prices X_T started from ln(spot); n_paths values, or
/// 2 n_paths with the antithetic partner of path i stored at n_paths + i.
std::vector<double> simulate_terminal(const ModelParams& params, double spot, double maturity,
                                      const McConfig& cfg);

/// Discounted mean call payoff. With antithetics a sample is the pair average.
McResult mc_price(const ModelParams& params, const Contract& contract, const McConfig& cfg);

/// Discounted mean of e^{X_T}; equals the spot for a martingale.
McResult mc_discounted_spot(const ModelParams& params, double spot, double maturity,
                            const McConfig& cfg);

}  // namespace svj
