#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "params_io.hpp"

namespace svj::bench {

// Uniform sampling ranges for random parameter sets. The spot is 100, the
// rate 0.001 and the jumps log-normal.
struct Range {
  double lo;
  double hi;
};

inline constexpr Range kSigma0SqRange{0.05, 0.5};
inline constexpr Range kThetaRange{0.05, 0.5};
inline constexpr Range kKappaRange{0.5, 3.0};
inline constexpr Range kNuRange{0.05, 0.5};
inline constexpr Range kRhoRange{-0.9, -0.1};
inline constexpr Range kLambdaRange{0.0, 0.5};
inline constexpr Range kMuJRange{-0.2, 0.1};
inline constexpr Range kSigmaJRange{0.05, 0.6};
inline constexpr double kSampleSpot = 100.0;
inline constexpr double kSampleRate = 0.001;

/// n draws, each redrawn until 2 kappa theta >= nu^2. Deterministic in seed.
std::vector<ParamsFile> sample_param_sets(int n, std::uint64_t seed);

/// 10 strikes x 10 maturities, strikes varying fastest; spot 100.
std::vector<Contract> option_batch();

}  // namespace svj::bench
