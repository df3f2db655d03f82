// svj: price, smile, iv, bench, mc-check and sample-params subcommands.

#include <cmath>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bench/commands.hpp"
#include "bench/params_io.hpp"

namespace {

using namespace svj::bench;

// "lo:hi:step" or a comma-separated list.
std::vector<double> parse_strikes(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0) ||
        hi < lo) {
      throw ParseError("strikes: expected lo:hi:step with step > 0 and hi >= lo");
    }
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError("strikes: cannot parse '" + tok + "'");
    }
  }
  return out;
}

void add_model_options(CLI::App* cmd, ModelArgs& m) {
  cmd->add_option("--params", m.params_path, "parameter JSON file")->required();
  cmd->add_option("--rho", m.rho, "correlation (overrides the file)");
  cmd->add_option("--nu", m.nu, "vol-of-vol (overrides the file)");
}

void add_contract_options(CLI::App* cmd, ContractArgs& c) {
  cmd->add_option("--spot", c.spot, "spot price (default: s0 from the file)");
  cmd->add_option("--strike", c.strike, "strike")->capture_default_str();
  cmd->add_option("--maturity", c.maturity, "time to maturity in years")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic-volatility jump-diffusion pricing: approximation, Fourier reference "
               "and Monte Carlo"};
  app.require_subcommand(1);

  ModelArgs model;
  ContractArgs contract;

  auto* price = app.add_subcommand("price", "approximate price as JSON");
  add_model_options(price, model);
  add_contract_options(price, contract);

  SmileArgs smile;
  std::string strikes = "80:120:5";
  auto* smile_cmd = app.add_subcommand("smile", "approximation vs reference across strikes, CSV");
  add_model_options(smile_cmd, model);
  smile_cmd->add_option("--spot", smile.spot, "spot price (default: s0 from the file)");
  smile_cmd->add_option("--strikes", strikes, "lo:hi:step or a comma list")
      ->capture_default_str();
  smile_cmd->add_option("--maturity", smile.maturity, "time to maturity")->capture_default_str();
  smile_cmd->add_flag("--iv", smile.iv, "add implied volatility columns");

  auto* iv = app.add_subcommand("iv", "approximate and reference implied volatility as JSON");
  add_model_options(iv, model);
  add_contract_options(iv, contract);

  int task = 1;
  std::uint64_t seed = 42;
  int runs = 3;
  auto* bench = app.add_subcommand("bench", "timing task 1, 2 or 3 as JSON");
  bench->add_option("--task", task, "task id")->check(CLI::IsMember({1, 2, 3}))
      ->capture_default_str();
  bench->add_option("--seed", seed, "sampling seed")->capture_default_str();
  bench->add_option("--runs", runs, "timed runs (median reported)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  McArgs mc;
  std::string scheme = "full-truncation";
  auto* mc_cmd = app.add_subcommand("mc-check", "Monte Carlo vs reference, PASS iff |z| <= 3");
  add_model_options(mc_cmd, model);
  add_contract_options(mc_cmd, contract);
  mc_cmd->add_option("--paths", mc.paths, "sample paths")->capture_default_str();
  mc_cmd->add_option("--steps", mc.steps, "time steps (0: 300 per year, at least 300)")
      ->capture_default_str();
  mc_cmd->add_option("--seed", mc.seed, "master seed")->capture_default_str();
  mc_cmd->add_flag("--antithetic", mc.antithetic, "antithetic pairs");
  mc_cmd->add_option("--scheme", scheme, "full-truncation or reflection")
      ->check(CLI::IsMember({"full-truncation", "reflection"}))
      ->capture_default_str();
  mc_cmd->add_option("--debug-drift-bias", mc.drift_bias,
                     "add a constant to the log drift (negative control)");

  int n_sets = 1;
  std::uint64_t sample_seed = 42;
  auto* sample = app.add_subcommand("sample-params", "random Feller-satisfying parameter sets");
  sample->add_option("-n,--count", n_sets, "number of sets")->check(CLI::PositiveNumber)
      ->capture_default_str();
  sample->add_option("--seed", sample_seed, "seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  if (*price) return cmd_price(model, contract, std::cout, std::cerr);
  if (*smile_cmd) {
    try {
      smile.strikes = parse_strikes(strikes);
    } catch (const ParseError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitParse;
    }
    return cmd_smile(model, smile, std::cout, std::cerr);
  }
  if (*iv) return cmd_iv(model, contract, std::cout, std::cerr);
  if (*bench) return cmd_bench(task, seed, runs, std::cout, std::cerr);
  if (*mc_cmd) {
    mc.scheme = scheme == "reflection" ? svj::VarianceScheme::Reflection
                                       : svj::VarianceScheme::FullTruncation;
    return cmd_mc_check(model, contract, mc, std::cout, std::cerr);
  }
  if (*sample) return cmd_sample_params(n_sets, sample_seed, std::cout, std::cerr);
  return kExitParse;
}
