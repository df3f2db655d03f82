#pragma once

// Subcommands of the svj tool. Each writes its report to `out`, diagnostics
// to `err`, and returns the process exit code.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "svj/mc_oracle.hpp"

namespace svj::bench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitMcFail = 4;

struct ModelArgs {
  std::string params_path;
  std::optional<double> rho;
  std::optional<double> nu;
};

struct ContractArgs {
  std::optional<double> spot;  ///< defaults to s0 of the params file
  double strike = 100.0;
  double maturity = 1.0;
};

struct SmileArgs {
  std::optional<double> spot;
  std::vector<double> strikes;
  double maturity = 1.0;
  bool iv = false;
};

struct McArgs {
  std::int64_t paths = 200000;
  int steps = 0;
  std::uint64_t seed = 42;
  bool antithetic = false;
  VarianceScheme scheme = VarianceScheme::FullTruncation;
  double drift_bias = 0.0;
};

int cmd_price(const ModelArgs& model, const ContractArgs& contract, std::ostream& out,
              std::ostream& err);
int cmd_smile(const ModelArgs& model, const SmileArgs& smile, std::ostream& out,
              std::ostream& err);
int cmd_iv(const ModelArgs& model, const ContractArgs& contract, std::ostream& out,
           std::ostream& err);
int cmd_mc_check(const ModelArgs& model, const ContractArgs& contract, const McArgs& mc,
                 std::ostream& out, std::ostream& err);
int cmd_sample_params(int n, std::uint64_t seed, std::ostream& out, std::ostream& err);
int cmd_bench(int task_id, std::uint64_t seed, int runs, std::ostream& out, std::ostream& err);

// Timing harness behind cmd_bench.

enum class BenchMethod { Approximation, OneIntegral, TwoIntegral };

struct MethodTiming {
  BenchMethod method;
  std::vector<double> run_seconds;
  double median_seconds = 0.0;
  std::int64_t evaluations = 0;
  std::int64_t failures = 0;
  double price_checksum = 0.0;  ///< compensated sum of all successful prices
};

struct BenchReport {
  int task_id = 0;
  int n_param_sets = 0;
  int n_options = 0;
  std::uint64_t seed = 0;
  std::vector<MethodTiming> methods;  ///< approximation, one-integral, two-integral

  const MethodTiming& timing(BenchMethod m) const;
  /// two-integral median time / method median time.
  double speedup(BenchMethod m) const;
};

/// 100, 1000 or 10000 parameter sets for tasks 1, 2, 3.
int task_param_sets(int task_id);

/// Prices the 100-option batch for every parameter set with each method on
/// the calling thread. An untimed pass over the first 100 parameter sets
/// precedes the timed runs; the median of `runs` timed passes is reported.
BenchReport run_bench(int task_id, std::uint64_t seed, int runs = 3);

nlohmann::json to_json(const BenchReport& report);

const char* method_name(BenchMethod m);

/// printf("%.17g").
std::string format17(double v);

}  // namespace svj::bench
