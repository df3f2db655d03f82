#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "params_io.hpp"
#include "sampling.hpp"
#include "svj/error.hpp"
#include "svj/implied_vol_approx.hpp"
#include "svj/parallel.hpp"
#include "svj/reference_pricer.hpp"

namespace svj::bench {

namespace {

using nlohmann::json;

// Maps exceptions to exit codes: bad input is 2, numerical failure is 3.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

ParamsFile load(const ModelArgs& args) {
  ParamsFile p = load_params_file(args.params_path);
  apply_overrides(p, args.rho, args.nu);
  return p;
}

Contract contract_of(const ParamsFile& p, const ContractArgs& c) {
  Contract out{c.spot.value_or(p.s0), c.strike, c.maturity};
  try {
    validate(out);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  return out;
}

json contract_json(const Contract& c) {
  return {{"spot", c.spot}, {"strike", c.strike}, {"maturity", c.maturity}};
}

json price_json(const PriceResult& r) {
  return {{"price", r.price},
          {"base_term", r.base_term},
          {"r0_term", r.r0_term},
          {"u0_term", r.u0_term},
          {"v0", r.v0},
          {"r0", r.r0},
          {"u0", r.u0},
          {"feller_satisfied", r.feller_satisfied},
          {"truncation",
           {{"n_max", r.truncation.n_max},
            {"tail_mass", r.truncation.tail_mass},
            {"tolerance", r.truncation.tolerance}}}};
}

double price_with(BenchMethod m, const ModelParams& params, const Contract& c) {
  switch (m) {
    case BenchMethod::Approximation:
      return price_approx(params, c).price;
    case BenchMethod::OneIntegral:
      return price_reference(params, c, reference_quadrature_config(),
                             ReferenceMethod::OneIntegral);
    case BenchMethod::TwoIntegral:
      return price_reference(params, c, reference_quadrature_config(),
                             ReferenceMethod::TwoIntegral);
  }
  return 0.0;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* method_name(BenchMethod m) {
  switch (m) {
    case BenchMethod::Approximation:
      return "approximation";
    case BenchMethod::OneIntegral:
      return "one_integral";
    case BenchMethod::TwoIntegral:
      return "two_integral";
  }
  return "?";
}

int cmd_price(const ModelArgs& model, const ContractArgs& contract, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const ParamsFile p = load(model);
    const Contract c = contract_of(p, contract);
    json j = price_json(price_approx(p.model, c));
    j["contract"] = contract_json(c);
    out << j.dump(2) << '\n';
    return kExitOk;
  });
}

int cmd_smile(const ModelArgs& model, const SmileArgs& smile, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const ParamsFile p = load(model);
    if (smile.strikes.empty()) throw ParseError("smile: no strikes");
    std::vector<double> strikes = smile.strikes;
    std::sort(strikes.begin(), strikes.end());
    for (double k : strikes) contract_of(p, {smile.spot, k, smile.maturity});
    const double spot = smile.spot.value_or(p.s0);

    struct Row {
      double approx = 0, ref = 0, approx_iv = 0, ref_iv = 0;
      std::string error;
    };
    std::vector<Row> rows(strikes.size());
    parallel_for(strikes.size(), [&](std::size_t i) {
      const Contract c{spot, strikes[i], smile.maturity};
      try {
        rows[i].approx = price_approx(p.model, c).price;
        rows[i].ref = price_reference(p.model, c);
        if (smile.iv) {
          rows[i].approx_iv = iv_surface_approx(p.model, spot, c.strike, c.maturity).iv_approx;
          rows[i].ref_iv = implied_vol_invert_jump_adjusted(rows[i].ref, c, p.model);
        }
      } catch (const std::exception& e) {
        rows[i].error = e.what();
      }
    });

    out << "strike,maturity,approx_price,ref_price,abs_error";
    if (smile.iv) out << ",approx_iv,ref_iv,iv_abs_error";
    out << '\n';
    int failed = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Row& r = rows[i];
      out << format17(strikes[i]) << ',' << format17(smile.maturity);
      if (!r.error.empty()) {
        ++failed;
        const int cols = smile.iv ? 6 : 3;
        for (int k = 0; k < cols; ++k) out << ",ERROR";
        out << '\n';
        err << "error: strike " << format17(strikes[i]) << ": " << r.error << '\n';
        continue;
      }
      out << ',' << format17(r.approx) << ',' << format17(r.ref) << ','
          << format17(std::abs(r.approx - r.ref));
      if (smile.iv) {
        out << ',' << format17(r.approx_iv) << ',' << format17(r.ref_iv) << ','
            << format17(std::abs(r.approx_iv - r.ref_iv));
      }
      out << '\n';
    }
    return failed == 0 ? kExitOk : kExitNumerical;
  });
}

int cmd_iv(const ModelArgs& model, const ContractArgs& contract, std::ostream& out,
           std::ostream& err) {
  return guarded(err, [&] {
    const ParamsFile p = load(model);
    const Contract c = contract_of(p, contract);
    const IvPoint iv = iv_surface_approx(p.model, c.spot, c.strike, c.maturity);
    const double ref = price_reference(p.model, c);
    const double ref_iv = implied_vol_invert_jump_adjusted(ref, c, p.model);
    if (iv.negative) err << "warning: approximate implied volatility is not positive\n";
    json j = {{"iv_approx", iv.iv_approx}, {"i1_hat", iv.i1_hat},   {"i2_hat", iv.i2_hat},
              {"v0", iv.v0},               {"negative", iv.negative}, {"ref_price", ref},
              {"ref_iv", ref_iv},          {"iv_abs_error", std::abs(iv.iv_approx - ref_iv)}};
    j["contract"] = contract_json(c);
    out << j.dump(2) << '\n';
    return kExitOk;
  });
}

int cmd_mc_check(const ModelArgs& model, const ContractArgs& contract, const McArgs& mc,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ParamsFile p = load(model);
    const Contract c = contract_of(p, contract);
    McConfig cfg;
    cfg.n_paths = mc.paths;
    cfg.n_steps = mc.steps;
    cfg.seed = mc.seed;
    cfg.antithetic = mc.antithetic;
    cfg.scheme = mc.scheme;
    cfg.drift_bias = mc.drift_bias;
    try {
      validate(cfg);
    } catch (const DomainError& e) {
      throw ParseError(e.what());
    }
    const double ref = price_reference(p.model, c);
    const McResult res = mc_price(p.model, c, cfg);
    const double z = res.std_error > 0.0 ? (res.value - ref) / res.std_error
                                         : (res.value == ref ? 0.0 : INFINITY);
    const bool pass = std::abs(z) <= 3.0;
    json j = {{"reference_price", ref},
              {"mc_price", res.value},
              {"std_error", res.std_error},
              {"z", std::isfinite(z) ? json(z) : json(nullptr)},
              {"n_samples", res.n_samples},
              {"n_steps", mc.steps > 0 ? mc.steps : default_steps(c.maturity)},
              {"seed", mc.seed},
              {"antithetic", mc.antithetic},
              {"result", pass ? "PASS" : "FAIL"}};
    j["contract"] = contract_json(c);
    out << j.dump(2) << '\n';
    return pass ? kExitOk : kExitMcFail;
  });
}

int cmd_sample_params(int n, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    json arr = json::array();
    for (const auto& p : sample_param_sets(n, seed)) arr.push_back(to_json(p));
    out << arr.dump(2) << '\n';
    return kExitOk;
  });
}

int task_param_sets(int task_id) {
  switch (task_id) {
    case 1:
      return 100;
    case 2:
      return 1000;
    case 3:
      return 10000;
    default:
      throw std::invalid_argument("bench: task must be 1, 2 or 3");
  }
}

const MethodTiming& BenchReport::timing(BenchMethod m) const {
  for (const auto& t : methods) {
    if (t.method == m) return t;
  }
  throw std::out_of_range("bench: method not in report");
}

double BenchReport::speedup(BenchMethod m) const {
  return timing(BenchMethod::TwoIntegral).median_seconds / timing(m).median_seconds;
}

BenchReport run_bench(int task_id, std::uint64_t seed, int runs) {
  if (runs < 1) throw std::invalid_argument("bench: runs must be >= 1");
  BenchReport report;
  report.task_id = task_id;
  report.n_param_sets = task_param_sets(task_id);
  report.seed = seed;
  const auto sets = sample_param_sets(report.n_param_sets, seed);
  const auto batch = option_batch();
  report.n_options = static_cast<int>(batch.size());

  for (BenchMethod m :
       {BenchMethod::Approximation, BenchMethod::OneIntegral, BenchMethod::TwoIntegral}) {
    MethodTiming t;
    t.method = m;
    // untimed warm-up over the first 100 sets (one task-1 pass)
    volatile double sink = 0.0;
    for (std::size_t i = 0; i < std::min<std::size_t>(sets.size(), 100); ++i) {
      for (const auto& c : batch) {
        try {
          sink = sink + price_with(m, sets[i].model, c);
        } catch (const std::exception&) {
        }
      }
    }
    for (int run = 0; run < runs; ++run) {
      long double checksum = 0.0L;
      std::int64_t failures = 0;
      const auto t0 = std::chrono::steady_clock::now();
      for (const auto& p : sets) {
        for (const auto& c : batch) {
          try {
            checksum += price_with(m, p.model, c);
          } catch (const std::exception&) {
            ++failures;
          }
        }
      }
      const auto t1 = std::chrono::steady_clock::now();
      t.run_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
      t.failures = failures;
      t.price_checksum = static_cast<double>(checksum);
    }
    t.evaluations = static_cast<std::int64_t>(sets.size() * batch.size());
    t.median_seconds = median(t.run_seconds);
    report.methods.push_back(t);
  }
  return report;
}

nlohmann::json to_json(const BenchReport& report) {
  json methods = json::object();
  for (const auto& t : report.methods) {
    methods[method_name(t.method)] = {{"median_seconds", t.median_seconds},
                                      {"run_seconds", t.run_seconds},
                                      {"evaluations", t.evaluations},
                                      {"failures", t.failures},
                                      {"price_checksum", t.price_checksum},
                                      {"speedup_vs_two_integral", report.speedup(t.method)}};
  }
  return {{"task", report.task_id},
          {"n_param_sets", report.n_param_sets},
          {"n_options", report.n_options},
          {"seed", report.seed},
          {"threads", 1},
          {"methods", methods}};
}

int cmd_bench(int task_id, std::uint64_t seed, int runs, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    out << to_json(run_bench(task_id, seed, runs)).dump(2) << '\n';
    return kExitOk;
  });
}

}  // namespace svj::bench
