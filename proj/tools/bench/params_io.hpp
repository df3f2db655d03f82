#pragma once

// JSON parameter files:
//
//   {"s0": 100, "r": 0.001, "sigma0_sq": 0.25, "kappa": 1.5, "theta": 0.2,
//    "nu": 0.05, "rho": -0.2,
//    "jump": {"type": "lognormal", "lambda": 0.05, "mu_j": -0.05, "sigma_j": 0.5}}
//
// jump.type is one of none, lognormal (mu_j, sigma_j), kou (p, eta1, eta2),
// loguniform (a, b). nu and rho may be left out and supplied on the command line.

#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "svj/approx_pricer.hpp"

namespace svj::bench {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParamsFile {
  double s0 = 100.0;
  ModelParams model;
  bool has_nu = false;
  bool has_rho = false;
};

/// Throws ParseError on malformed JSON, missing or mistyped keys, or values
/// that violate the model invariants.
ParamsFile parse_params(const std::string& text);
ParamsFile load_params_file(const std::string& path);

/// Applies the overrides and checks that nu and rho are now known.
/// Throws ParseError naming the missing key otherwise.
void apply_overrides(ParamsFile& p, std::optional<double> rho, std::optional<double> nu);

nlohmann::json to_json(const ParamsFile& p);

}  // namespace svj::bench
