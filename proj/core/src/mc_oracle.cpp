#include "svj/mc_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "svj/error.hpp"
#include "svj/parallel.hpp"

namespace svj {

namespace {

constexpr int kLanes = 64;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t block_seed(std::uint64_t seed, std::int64_t block) {
  return splitmix64(splitmix64(seed) ^ splitmix64(static_cast<std::uint64_t>(block) + 1));
}

// Running mean and M2; merged in block order.
struct Moments {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(o.n);
    const double delta = o.mean - mean;
    const double total = na + nb;
    mean += delta * nb / total;
    m2 += o.m2 + delta * delta * na * nb / total;
    n += o.n;
  }
};

using Engine = std::mt19937_64;

class JumpSampler {
 public:
  JumpSampler(const JumpLaw& law, double maturity)
      : law_(law), poisson_(law.intensity > 0.0 ? law.intensity * maturity : 1.0) {}

  double operator()(Engine& rng) {
    if (!(law_.intensity > 0.0)) return 0.0;
    const int n = poisson_(rng);
    if (n == 0) return 0.0;
    return std::visit([&](const auto& shape) { return sum(n, shape, rng); }, law_.shape);
  }

 private:
  double sum(int n, const LogNormalJumps& s, Engine& rng) {
    return n * s.mu_j + std::sqrt(static_cast<double>(n)) * s.sigma_j * normal_(rng);
  }
  double sum(int n, const KouJumps& s, Engine& rng) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = exponential_(rng);
      total += uniform_(rng) < s.p ? e / s.eta1 : -e / s.eta2;
    }
    return total;
  }
  double sum(int n, const LogUniformJumps& s, Engine& rng) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += s.a + (s.b - s.a) * uniform_(rng);
    return total;
  }

  const JumpLaw& law_;
  boost::random::poisson_distribution<int, double> poisson_;
  boost::random::normal_distribution<double> normal_;
  boost::random::exponential_distribution<double> exponential_;
  boost::random::uniform_01<double> uniform_;
};

struct PathSetup {
  double x0;
  double drift;  // (r - lambda k + bias) T
  double dt;
  double sqrt_dt;
  int steps;
  double rho_perp;
};

// Simulates sample units [0, units) of one block and hands each terminal
// log-price (and its antithetic partner) to sink(unit, x, x_anti).
void simulate_block(const ModelParams& params, const PathSetup& ps, const McConfig& cfg,
                    std::int64_t block, std::int64_t units,
                    const std::function<void(std::int64_t, double, double)>& sink) {
  Engine rng(block_seed(cfg.seed, block));
  boost::random::normal_distribution<double> normal;
  JumpSampler jumps(params.jumps, ps.dt * ps.steps);
  const auto& h = params.heston;
  const bool reflect = cfg.scheme == VarianceScheme::Reflection;
  const bool anti = cfg.antithetic;

  std::array<double, kLanes> z{};
  std::array<double, kLanes> v{}, isdw{}, ivdt{};
  std::array<double, kLanes> va{}, isdwa{}, ivdta{};

  auto step = [&](std::array<double, kLanes>& var, std::array<double, kLanes>& s_dw,
                  std::array<double, kLanes>& s_dt, int m, double sign) {
    const double kdt = h.kappa * ps.dt;
    const double ktdt = h.kappa * h.theta * ps.dt;
    const double nu_sdt = h.nu * ps.sqrt_dt * sign;
    for (int i = 0; i < m; ++i) {
      const double vp = std::max(var[i], 0.0);
      const double sq = std::sqrt(vp);
      const double w = sq * z[i];
      s_dw[i] += w;
      s_dt[i] += vp;
      const double next = var[i] + ktdt - kdt * vp + nu_sdt * w;
      var[i] = reflect ? std::abs(next) : next;
    }
  };

  for (std::int64_t base = 0; base < units; base += kLanes) {
    const int m = static_cast<int>(std::min<std::int64_t>(kLanes, units - base));
    v.fill(h.sigma0_sq);
    isdw.fill(0.0);
    ivdt.fill(0.0);
    va.fill(h.sigma0_sq);
    isdwa.fill(0.0);
    ivdta.fill(0.0);
    for (int s = 0; s < ps.steps; ++s) {
      for (int i = 0; i < m; ++i) z[i] = normal(rng);
      step(v, isdw, ivdt, m, 1.0);
      if (anti) step(va, isdwa, ivdta, m, -1.0);
    }
    for (int i = 0; i < m; ++i) {
      const double zp = normal(rng);
      const double j = jumps(rng);
      auto terminal = [&](double s_dw, double s_dt, double sign) {
        const double int_v = s_dt * ps.dt;
        return ps.x0 + ps.drift - 0.5 * int_v + sign * h.rho * ps.sqrt_dt * s_dw +
               sign * ps.rho_perp * std::sqrt(int_v) * zp + j;
      };
      const double x = terminal(isdw[i], ivdt[i], 1.0);
      const double xa = anti ? terminal(isdwa[i], ivdta[i], -1.0) : 0.0;
      sink(base + i, x, xa);
    }
  }
}

PathSetup make_setup(const ModelParams& params, double spot, double maturity,
                     const McConfig& cfg) {
  validate(params);
  validate(cfg);
  if (!(spot > 0.0)) throw DomainError("mc: spot must be positive");
  if (!(maturity > 0.0)) throw DomainError("mc: maturity must be positive");
  PathSetup ps{};
  ps.steps = cfg.n_steps > 0 ? cfg.n_steps : default_steps(maturity);
  ps.x0 = std::log(spot);
  const double lk =
      params.jumps.intensity > 0.0 ? params.jumps.intensity * compensator_k(params.jumps) : 0.0;
  ps.drift = (params.r - lk + cfg.drift_bias) * maturity;
  ps.dt = maturity / ps.steps;
  ps.sqrt_dt = std::sqrt(ps.dt);
  ps.rho_perp = std::sqrt(1.0 - params.heston.rho * params.heston.rho);
  return ps;
}

McResult reduce(const ModelParams& params, double spot, double maturity, const McConfig& cfg,
                const std::function<double(double)>& sample) {
  const PathSetup ps = make_setup(params, spot, maturity, cfg);
  const std::int64_t blocks = (cfg.n_paths + kMcBlockSize - 1) / kMcBlockSize;
  std::vector<Moments> partial(static_cast<std::size_t>(blocks));
  parallel_for(
      static_cast<std::size_t>(blocks),
      [&](std::size_t b) {
        const auto block = static_cast<std::int64_t>(b);
        const std::int64_t units = std::min(kMcBlockSize, cfg.n_paths - block * kMcBlockSize);
        Moments& acc = partial[b];
        simulate_block(params, ps, cfg, block, units, [&](std::int64_t, double x, double xa) {
          acc.add(cfg.antithetic ? 0.5 * (sample(x) + sample(xa)) : sample(x));
        });
      },
      cfg.threads);
  Moments total;
  for (const auto& m : partial) total.merge(m);
  McResult out;
  out.value = total.mean;
  out.n_samples = total.n;
  out.std_error = std::sqrt(total.m2 / static_cast<double>(total.n - 1) /
                            static_cast<double>(total.n));
  return out;
}

}  // namespace

void validate(const McConfig& cfg) {
  if (cfg.n_paths < 2) throw DomainError("mc: n_paths must be >= 2");
  if (cfg.n_steps < 0) throw DomainError("mc: n_steps must be >= 1 (or 0 for the default)");
}

int default_steps(double maturity) {
  return static_cast<int>(std::ceil(300.0 * std::max(1.0, maturity)));
}

std::vector<double> simulate_terminal(const ModelParams& params, double spot, double maturity,
                                      const McConfig& cfg) {
  const PathSetup ps = make_setup(params, spot, maturity, cfg);
  const std::int64_t n = cfg.n_paths;
  std::vector<double> out(static_cast<std::size_t>(cfg.antithetic ? 2 * n : n));
  const std::int64_t blocks = (n + kMcBlockSize - 1) / kMcBlockSize;
  parallel_for(
      static_cast<std::size_t>(blocks),
      [&](std::size_t b) {
        const auto block = static_cast<std::int64_t>(b);
        const std::int64_t first = block * kMcBlockSize;
        const std::int64_t units = std::min(kMcBlockSize, n - first);
        simulate_block(params, ps, cfg, block, units, [&](std::int64_t i, double x, double xa) {
          out[static_cast<std::size_t>(first + i)] = x;
          if (cfg.antithetic) out[static_cast<std::size_t>(n + first + i)] = xa;
        });
      },
      cfg.threads);
  return out;
}

McResult mc_price(const ModelParams& params, const Contract& contract, const McConfig& cfg) {
  validate(contract);
  const double df = std::exp(-params.r * contract.maturity);
  const double K = contract.strike;
  return reduce(params, contract.spot, contract.maturity, cfg,
                [&](double x) { return df * std::max(std::exp(x) - K, 0.0); });
}

McResult mc_discounted_spot(const ModelParams& params, double spot, double maturity,
                            const McConfig& cfg) {
  const double df = std::exp(-params.r * maturity);
  return reduce(params, spot, maturity, cfg, [&](double x) { return df * std::exp(x); });
}

}  // namespace svj
