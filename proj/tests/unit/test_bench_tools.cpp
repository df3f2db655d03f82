#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "params_io.hpp"
#include "sampling.hpp"
#include "svj/bs_kernel.hpp"

using namespace svj;
using namespace svj::bench;

namespace {

const std::string kBaseline = std::string(SVJ_PARAMS_DIR) + "/baseline.json";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string(SVJ_TEST_TMP_DIR) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

double chi_square(const std::vector<int>& counts, const std::vector<double>& probs) {
  double n = 0;
  for (int c : counts) n += c;
  double chi = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = n * probs[i];
    chi += (counts[i] - e) * (counts[i] - e) / e;
  }
  return chi;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Acceptance probability of the Feller test conditional on one coordinate,
// the others uniform on their ranges.
double accept_given_nu(double nu) {
  const double c = 0.5 * nu * nu;
  return oracle::integrate(
             [&](double kappa) {
               const double lo = std::max(kThetaRange.lo, c / kappa);
               return std::max(0.0, kThetaRange.hi - lo) / (kThetaRange.hi - kThetaRange.lo);
             },
             kKappaRange.lo, kKappaRange.hi, 64) /
         (kKappaRange.hi - kKappaRange.lo);
}

double accept_given_kappa_theta(double product) {
  return clamp01((std::sqrt(2.0 * product) - kNuRange.lo) / (kNuRange.hi - kNuRange.lo));
}

double accept_given_kappa(double kappa) {
  return oracle::integrate([&](double th) { return accept_given_kappa_theta(kappa * th); },
                           kThetaRange.lo, kThetaRange.hi, 64) /
         (kThetaRange.hi - kThetaRange.lo);
}

double accept_given_theta(double theta) {
  return oracle::integrate([&](double k) { return accept_given_kappa_theta(k * theta); },
                           kKappaRange.lo, kKappaRange.hi, 64) /
         (kKappaRange.hi - kKappaRange.lo);
}

std::vector<double> bin_probs(Range r, const std::function<double(double)>& weight, int bins) {
  std::vector<double> p(bins);
  double total = 0;
  const double w = (r.hi - r.lo) / bins;
  for (int b = 0; b < bins; ++b) {
    p[b] = weight ? oracle::integrate(weight, r.lo + b * w, r.lo + (b + 1) * w, 8) : w;
    total += p[b];
  }
  for (double& v : p) v /= total;
  return p;
}

std::vector<int> bin_counts(const std::vector<double>& xs, Range r, int bins) {
  std::vector<int> c(bins, 0);
  for (double x : xs) {
    int b = static_cast<int>((x - r.lo) / (r.hi - r.lo) * bins);
    c[std::min(bins - 1, std::max(0, b))]++;
  }
  return c;
}

}  // namespace

TEST_SUITE("bench_tools") {
  TEST_CASE("params file parses and round-trips") {
    ParamsFile p = load_params_file(kBaseline);
    CHECK(p.s0 == 100.0);
    CHECK(p.model.r == 0.001);
    CHECK(p.model.heston.sigma0_sq == 0.25);
    CHECK(p.model.heston.kappa == 1.5);
    CHECK(p.model.heston.theta == 0.2);
    CHECK(p.model.jumps.intensity == 0.05);
    CHECK_FALSE(p.has_rho);
    CHECK_FALSE(p.has_nu);
    CHECK_THROWS_AS(apply_overrides(p, std::nullopt, 0.05), ParseError);
    apply_overrides(p, -0.2, 0.05);
    const ParamsFile q = parse_params(to_json(p).dump());
    CHECK(to_json(q) == to_json(p));

    const auto kou = parse_params(
        R"({"r":0,"sigma0_sq":0.1,"kappa":1,"theta":0.1,"nu":0.1,"rho":0,
            "jump":{"type":"kou","lambda":1,"p":0.3,"eta1":5,"eta2":4}})");
    CHECK(std::get<KouJumps>(kou.model.jumps.shape).eta2 == 4.0);
    const auto none = parse_params(R"({"r":0,"sigma0_sq":0.1,"kappa":1,"theta":0.1,"nu":0.1,"rho":0})");
    CHECK(none.model.jumps.intensity == 0.0);
    CHECK(to_json(none)["jump"]["type"] == "none");
  }

  TEST_CASE("malformed params are parse errors") {
    CHECK_THROWS_AS(parse_params("{"), ParseError);
    CHECK_THROWS_AS(parse_params("[1,2]"), ParseError);
    CHECK_THROWS_AS(parse_params(R"({"r":0,"kappa":1,"theta":0.1})"), ParseError);
    CHECK_THROWS_AS(parse_params(R"({"r":"x","sigma0_sq":0.1,"kappa":1,"theta":0.1})"), ParseError);
    CHECK_THROWS_AS(parse_params(R"({"r":0,"sigma0_sq":-0.1,"kappa":1,"theta":0.1})"), ParseError);
    CHECK_THROWS_AS(
        parse_params(R"({"r":0,"sigma0_sq":0.1,"kappa":1,"theta":0.1,"jump":{"type":"cauchy","lambda":1}})"),
        ParseError);
    CHECK_THROWS_AS(load_params_file("/nonexistent/params.json"), ParseError);
  }

  TEST_CASE("sample_param_sets") {
    const auto a = sample_param_sets(1, 42);
    const auto b = sample_param_sets(1, 42);
    CHECK(to_json(a[0]) == to_json(b[0]));
    const auto sets = sample_param_sets(100, 7);
    CHECK(sets.size() == 100);
    auto in = [](double v, Range r) { return v >= r.lo && v <= r.hi; };
    for (const auto& p : sets) {
      const auto& h = p.model.heston;
      const auto& ln = std::get<LogNormalJumps>(p.model.jumps.shape);
      CHECK(feller_satisfied(h));
      CHECK(in(h.sigma0_sq, kSigma0SqRange));
      CHECK(in(h.theta, kThetaRange));
      CHECK(in(h.kappa, kKappaRange));
      CHECK(in(h.nu, kNuRange));
      CHECK(in(h.rho, kRhoRange));
      CHECK(in(p.model.jumps.intensity, kLambdaRange));
      CHECK(in(ln.mu_j, kMuJRange));
      CHECK(in(ln.sigma_j, kSigmaJRange));
    }
    CHECK_THROWS(sample_param_sets(0, 1));
  }

  TEST_CASE("sampled marginals follow the uniform law conditioned on Feller (chi-square, 1%)") {
    const auto sets = sample_param_sets(10000, 2024);
    const int bins = 10;
    const double crit = 21.666;  // chi-square 99% quantile, 9 degrees of freedom
    auto column = [&](auto get) {
      std::vector<double> v;
      for (const auto& p : sets) v.push_back(get(p));
      return v;
    };
    struct Col {
      const char* name;
      Range r;
      std::vector<double> xs;
      std::function<double(double)> weight;
    };
    std::vector<Col> cols = {
        {"sigma0_sq", kSigma0SqRange, column([](const ParamsFile& p) { return p.model.heston.sigma0_sq; }), {}},
        {"rho", kRhoRange, column([](const ParamsFile& p) { return p.model.heston.rho; }), {}},
        {"lambda", kLambdaRange, column([](const ParamsFile& p) { return p.model.jumps.intensity; }), {}},
        {"mu_j", kMuJRange,
         column([](const ParamsFile& p) { return std::get<LogNormalJumps>(p.model.jumps.shape).mu_j; }), {}},
        {"sigma_j", kSigmaJRange,
         column([](const ParamsFile& p) { return std::get<LogNormalJumps>(p.model.jumps.shape).sigma_j; }), {}},
        {"nu", kNuRange, column([](const ParamsFile& p) { return p.model.heston.nu; }), accept_given_nu},
        {"kappa", kKappaRange, column([](const ParamsFile& p) { return p.model.heston.kappa; }), accept_given_kappa},
        {"theta", kThetaRange, column([](const ParamsFile& p) { return p.model.heston.theta; }), accept_given_theta},
    };
    for (const auto& c : cols) {
      INFO(c.name);
      CHECK(chi_square(bin_counts(c.xs, c.r, bins), bin_probs(c.r, c.weight, bins)) < crit);
    }
  }

  TEST_CASE("option batch") {
    const auto batch = option_batch();
    CHECK(batch.size() == 100);
    std::set<std::pair<double, double>> unique;
    for (const auto& c : batch) unique.insert({c.strike, c.maturity});
    CHECK(unique.size() == 100);
  }

  TEST_CASE("price command") {
    std::ostringstream out, err;
    CHECK(cmd_price({kBaseline, -0.2, 0.05}, {std::nullopt, 100, 0.3}, out, err) == kExitOk);
    const auto j = nlohmann::json::parse(out.str());
    for (const char* key : {"price", "base_term", "r0_term", "u0_term", "truncation"}) {
      CHECK(j.contains(key));
    }
    const ParamsFile p = [] {
      ParamsFile f = load_params_file(kBaseline);
      apply_overrides(f, -0.2, 0.05);
      return f;
    }();
    CHECK(j["price"].get<double>() == price_approx(p.model, {100, 100, 0.3}).price);

    const std::string flat = write_temp(
        "flat.json", R"({"s0":100,"r":0.02,"sigma0_sq":0.09,"kappa":1,"theta":0.09,"nu":0,"rho":0})");
    std::ostringstream o2, e2;
    CHECK(cmd_price({flat, {}, {}}, {std::nullopt, 95, 0.5}, o2, e2) == kExitOk);
    const double bs = bs_price({0.0, std::log(100.0), 0.3, 95, 0.02, 0.5});
    CHECK(nlohmann::json::parse(o2.str())["price"].get<double>() ==
          doctest::Approx(bs).epsilon(1e-13));

    std::ostringstream o3, e3;
    CHECK(cmd_price({write_temp("bad.json", "{ nope"), {}, {}}, {}, o3, e3) == kExitParse);
    CHECK_FALSE(e3.str().empty());
    std::ostringstream o4, e4;
    CHECK(cmd_price({kBaseline, {}, {}}, {}, o4, e4) == kExitParse);
    std::ostringstream o5, e5;
    CHECK(cmd_price({kBaseline, -0.2, 0.05}, {std::nullopt, -100, 0.3}, o5, e5) == kExitParse);
    // a jump intensity beyond the series cap is a numerical failure
    const std::string heavy = write_temp(
        "heavy.json",
        R"({"r":0,"sigma0_sq":0.1,"kappa":1,"theta":0.1,"nu":0.1,"rho":0,
            "jump":{"type":"lognormal","lambda":1000,"mu_j":0,"sigma_j":0.1}})");
    std::ostringstream o6, e6;
    CHECK(cmd_price({heavy, {}, {}}, {std::nullopt, 100, 1.0}, o6, e6) == kExitNumerical);
  }

  TEST_CASE("smile command matches the golden file byte for byte") {
    std::ostringstream out, err;
    SmileArgs s;
    for (double k = 80; k <= 120; k += 5) s.strikes.push_back(k);
    s.maturity = 0.3;
    s.iv = true;
    CHECK(cmd_smile({kBaseline, -0.2, 0.05}, s, out, err) == kExitOk);
    CHECK(out.str() == slurp(std::string(SVJ_GOLDEN_DIR) + "/smile_baseline_iv.csv"));

    // abs_error is recomputed from the two price columns
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "strike,maturity,approx_price,ref_price,abs_error,approx_iv,ref_iv,iv_abs_error");
    while (std::getline(lines, line)) {
      std::vector<double> v;
      std::istringstream cells(line);
      std::string cell;
      while (std::getline(cells, cell, ',')) v.push_back(std::stod(cell));
      REQUIRE(v.size() == 8);
      CHECK(v[4] == std::abs(v[2] - v[3]));
      CHECK(v[4] <= 5e-4);
      CHECK(v[7] <= 1e-4);
    }
  }

  TEST_CASE("smile rows are sorted and failures flagged") {
    std::ostringstream out, err;
    SmileArgs s;
    s.strikes = {110, 90, 100};
    s.maturity = 0.3;
    CHECK(cmd_smile({kBaseline, -0.2, 0.05}, s, out, err) == kExitOk);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "strike,maturity,approx_price,ref_price,abs_error");
    std::getline(lines, line);
    CHECK(line.rfind("90,", 0) == 0);

    // an intensity too large for the series cap fails per row
    const std::string heavy = write_temp(
        "heavy_smile.json",
        R"({"r":0,"sigma0_sq":0.1,"kappa":1,"theta":0.1,"nu":0.1,"rho":0,
            "jump":{"type":"lognormal","lambda":300,"mu_j":0,"sigma_j":0.1}})");
    std::ostringstream o2, e2;
    SmileArgs s2;
    s2.strikes = {100};
    s2.maturity = 1.0;
    CHECK(cmd_smile({heavy, {}, {}}, s2, o2, e2) == kExitNumerical);
    CHECK(o2.str().find("100,1,ERROR,ERROR,ERROR") != std::string::npos);
  }

  TEST_CASE("iv command") {
    std::ostringstream out, err;
    CHECK(cmd_iv({kBaseline, -0.2, 0.05}, {std::nullopt, 105, 0.3}, out, err) == kExitOk);
    const auto j = nlohmann::json::parse(out.str());
    CHECK(j["iv_abs_error"].get<double>() < 1e-4);
    CHECK(j["iv_approx"].get<double>() ==
          doctest::Approx(j["v0"].get<double>() + j["i1_hat"].get<double>() +
                          j["i2_hat"].get<double>()).epsilon(1e-15));
  }

  TEST_CASE("mc-check: pass, negative control, and the flat model") {
    McArgs mc;
    mc.paths = 50000;
    mc.steps = 100;
    std::ostringstream out, err;
    CHECK(cmd_mc_check({kBaseline, -0.2, 0.05}, {std::nullopt, 100, 0.3}, mc, out, err) == kExitOk);
    CHECK(nlohmann::json::parse(out.str())["result"] == "PASS");

    mc.drift_bias = 0.5;
    std::ostringstream o2, e2;
    CHECK(cmd_mc_check({kBaseline, -0.2, 0.05}, {std::nullopt, 100, 0.3}, mc, o2, e2) ==
          kExitMcFail);
    CHECK(nlohmann::json::parse(o2.str())["result"] == "FAIL");

    mc.drift_bias = 0.0;
    const std::string flat = write_temp(
        "flat_mc.json", R"({"s0":100,"r":0.01,"sigma0_sq":0.04,"kappa":1,"theta":0.04,"nu":0,"rho":0})");
    std::ostringstream o3, e3;
    CHECK(cmd_mc_check({flat, {}, {}}, {std::nullopt, 100, 1.0}, mc, o3, e3) == kExitOk);
    // payoff standard deviation is about 14.5 for this contract
    const double se = nlohmann::json::parse(o3.str())["std_error"].get<double>();
    CHECK(se > 0.04);
    CHECK(se < 0.09);

    mc.paths = 1;
    std::ostringstream o4, e4;
    CHECK(cmd_mc_check({flat, {}, {}}, {std::nullopt, 100, 1.0}, mc, o4, e4) == kExitParse);
  }

  TEST_CASE("sample-params output matches the golden file") {
    std::ostringstream out, err;
    CHECK(cmd_sample_params(3, 42, out, err) == kExitOk);
    CHECK(out.str() == slurp(std::string(SVJ_GOLDEN_DIR) + "/sample_params_n3_seed42.json"));
  }

  TEST_CASE("bench report structure and determinism of prices") {
    // task ids outside 1..3 are rejected
    CHECK_THROWS(task_param_sets(4));
    std::ostringstream out, err;
    CHECK(cmd_bench(7, 1, 1, out, err) == kExitParse);
  }
}
