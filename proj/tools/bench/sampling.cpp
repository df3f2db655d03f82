#include "sampling.hpp"

#include <random>
#include <stdexcept>

namespace svj::bench {

std::vector<ParamsFile> sample_param_sets(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_param_sets: n must be >= 1");
  std::mt19937_64 rng(seed);
  auto draw = [&](Range r) { return std::uniform_real_distribution<double>(r.lo, r.hi)(rng); };

  std::vector<ParamsFile> out;
  out.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(out.size()) < n) {
    ParamsFile p;
    p.s0 = kSampleSpot;
    p.has_nu = true;
    p.has_rho = true;
    p.model.r = kSampleRate;
    auto& h = p.model.heston;
    h.sigma0_sq = draw(kSigma0SqRange);
    h.theta = draw(kThetaRange);
    h.kappa = draw(kKappaRange);
    h.nu = draw(kNuRange);
    h.rho = draw(kRhoRange);
    const double lambda = draw(kLambdaRange);
    const double mu_j = draw(kMuJRange);
    const double sigma_j = draw(kSigmaJRange);
    p.model.jumps = JumpLaw{lambda, LogNormalJumps{mu_j, sigma_j}};
    if (feller_satisfied(h)) out.push_back(p);
  }
  return out;
}

std::vector<Contract> option_batch() {
  static constexpr double kStrikes[] = {70, 80, 90, 95, 100, 105, 110, 120, 130, 150};
  static constexpr double kMaturities[] = {0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0};
  std::vector<Contract> out;
  out.reserve(100);
  for (double t : kMaturities) {
    for (double k : kStrikes) out.push_back({kSampleSpot, k, t});
  }
  return out;
}

}  // namespace svj::bench
