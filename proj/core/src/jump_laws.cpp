#include "svj/jump_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>

#include <boost/math/special_functions/gamma.hpp>

#include "svj/bs_kernel.hpp"
#include "svj/error.hpp"

namespace svj {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

// n-fold log-uniform densities above this order use the B-spline recurrence;
// the alternating Irwin-Hall sum loses digits to cancellation.
constexpr int kLogUniformDirectMaxN = 12;

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// i * log(x) with the convention 0 * log(0) = 0.
double xlogy(int i, double x) {
  if (i == 0) return 0.0;
  return x > 0.0 ? i * std::log(x) : kNegInf;
}

double log_sum_exp(const std::vector<double>& terms) {
  double m = kNegInf;
  for (double t : terms) m = std::max(m, t);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

std::shared_ptr<const KouCoefficients> compute_kou_coefficients(int n, const KouJumps& law) {
  auto c = std::make_shared<KouCoefficients>();
  c->n = n;
  c->log_p.assign(n + 1, kNegInf);
  c->log_q.assign(n + 1, kNegInf);
  const double q = 1.0 - law.p;
  const double up = law.eta1 / (law.eta1 + law.eta2);
  const double down = law.eta2 / (law.eta1 + law.eta2);
  const double log_up = std::log(up);
  const double log_down = std::log(down);
  std::vector<double> terms_p;
  std::vector<double> terms_q;
  for (int k = 1; k <= n - 1; ++k) {
    terms_p.clear();
    terms_q.clear();
    for (int i = k; i <= n - 1; ++i) {
      const double comb = log_binomial(n - k - 1, i - k) + log_binomial(n, i);
      terms_p.push_back(comb + (i - k) * log_up + (n - i) * log_down + xlogy(i, law.p) +
                        xlogy(n - i, q));
      terms_q.push_back(comb + (n - i) * log_up + (i - k) * log_down + xlogy(n - i, law.p) +
                        xlogy(i, q));
    }
    c->log_p[k] = log_sum_exp(terms_p);
    c->log_q[k] = log_sum_exp(terms_q);
  }
  c->log_p[n] = xlogy(n, law.p);
  c->log_q[n] = xlogy(n, q);
  return c;
}

struct KouKey {
  int n;
  double p;
  double eta1;
  double eta2;
  bool operator<(const KouKey& o) const {
    return std::tie(n, p, eta1, eta2) < std::tie(o.n, o.p, o.eta1, o.eta2);
  }
};

class KouCache {
 public:
  std::shared_ptr<const KouCoefficients> get(int n, const KouJumps& law) {
    const KouKey key{n, law.p, law.eta1, law.eta2};
    {
      std::shared_lock lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    auto fresh = compute_kou_coefficients(n, law);
    std::unique_lock lock(mutex_);
    if (cache_.size() > kMaxEntries) cache_.clear();
    auto [it, inserted] = cache_.emplace(key, std::move(fresh));
    return it->second;
  }

 private:
  static constexpr std::size_t kMaxEntries = 4096;
  std::shared_mutex mutex_;
  std::map<KouKey, std::shared_ptr<const KouCoefficients>> cache_;
};

KouCache& kou_cache() {
  static KouCache cache;
  return cache;
}

// Irwin-Hall density of the sum of n uniforms on [0, 1], direct formula.
double irwin_hall_direct(int n, double z) {
  if (z < 0.0 || z > n) return 0.0;
  // symmetric about n / 2; the alternating sum cancels badly past the middle
  z = std::min(z, n - z);
  // largest integer strictly below z (0 at z = 0)
  const int top = z > 0.0 ? static_cast<int>(std::ceil(z)) - 1 : 0;
  double sum = 0.0;
  for (int i = 0; i <= std::min(top, n); ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    sum += sign * std::exp(log_binomial(n, i)) * std::pow(z - i, n - 1);
  }
  return sum / std::exp(std::lgamma(static_cast<double>(n)));
}

// Same density via the cardinal B-spline recurrence
// M_k(z) = [z M_{k-1}(z) + (k - z) M_{k-1}(z - 1)] / (k - 1).
double irwin_hall_recurrence(int n, double z) {
  if (z < 0.0 || z > n) return 0.0;
  std::vector<double> m(n, 0.0);  // m[j] = M_k(z - j)
  for (int j = 0; j < n; ++j) {
    const double w = z - j;
    m[j] = (w >= 0.0 && w < 1.0) ? 1.0 : 0.0;
  }
  for (int k = 2; k <= n; ++k) {
    for (int j = 0; j <= n - k; ++j) {
      const double w = z - j;
      m[j] = (w * m[j] + (k - w) * m[j + 1]) / (k - 1);
    }
  }
  return m[0];
}

RealFunction scaled(const RealFunction& h, double shift, double scale,
                    const std::function<double(double)>& weight) {
  return [&h, shift, scale, &weight](double z) {
    const double w = weight(z);
    return w == 0.0 ? 0.0 : h(shift + scale * z) * w;
  };
}

}  // namespace

void validate(const JumpLaw& law) {
  if (!(law.intensity >= 0.0)) throw DomainError("jump law: intensity must be >= 0");
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LogNormalJumps>) {
          if (!(s.sigma_j >= 0.0)) throw DomainError("log-normal jumps: sigma_j must be >= 0");
        } else if constexpr (std::is_same_v<T, KouJumps>) {
          if (!(s.p >= 0.0 && s.p <= 1.0)) throw DomainError("Kou jumps: p must lie in [0, 1]");
          if (!(s.eta1 > 1.0)) throw DomainError("Kou jumps: eta1 must exceed 1");
          if (!(s.eta2 > 0.0)) throw DomainError("Kou jumps: eta2 must be positive");
        } else {
          if (!(s.a < s.b)) throw DomainError("log-uniform jumps: requires a < b");
        }
      },
      law.shape);
}

double poisson_pmf(int n, double lambda_t) noexcept {
  if (n < 0) return 0.0;
  if (lambda_t == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(-lambda_t + n * std::log(lambda_t) - std::lgamma(n + 1.0));
}

SeriesTruncation truncate_series(double lambda_t, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw DomainError("truncate_series: tol must lie in (0, 1)");
  if (!(lambda_t >= 0.0)) throw DomainError("truncate_series: lambda*T must be >= 0");
  if (lambda_t == 0.0) return {0, 0.0, tol};
  int n = 0;
  for (;; ++n) {
    // P(N > n) = P(n + 1, lambda T), the regularised lower incomplete gamma
    const double tail = boost::math::gamma_p(n + 1.0, lambda_t);
    if (tail <= tol) return {n, tail, tol};
  }
}

double compensator_k(const JumpLaw& law) {
  validate(law);
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LogNormalJumps>) {
          return std::expm1(s.mu_j + 0.5 * s.sigma_j * s.sigma_j);
        } else if constexpr (std::is_same_v<T, KouJumps>) {
          return s.p * s.eta1 / (s.eta1 - 1.0) + (1.0 - s.p) * s.eta2 / (s.eta2 + 1.0) - 1.0;
        } else {
          return (std::exp(s.b) - std::exp(s.a)) / (s.b - s.a) - 1.0;
        }
      },
      law.shape);
}

std::complex<double> jump_char_fn(const JumpShape& shape, std::complex<double> u) {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  return std::visit(
      [&](const auto& s) -> C {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LogNormalJumps>) {
          return std::exp(i * u * s.mu_j - 0.5 * u * u * s.sigma_j * s.sigma_j);
        } else if constexpr (std::is_same_v<T, KouJumps>) {
          return s.p * s.eta1 / (s.eta1 - i * u) + (1.0 - s.p) * s.eta2 / (s.eta2 + i * u);
        } else {
          const C z = i * u * (s.b - s.a);
          // (e^z - 1) / z
          const C ratio = std::abs(z) < 1e-4 ? 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0
                                             : (std::exp(z) - 1.0) / z;
          return std::exp(i * u * s.a) * ratio;
        }
      },
      shape);
}

LognormalShift lognormal_shift(int n, const LogNormalJumps& law, double intensity, double v0,
                               double r, double maturity) {
  if (n < 0) throw DomainError("lognormal_shift: n must be >= 0");
  if (!(maturity > 0.0)) throw DomainError("lognormal_shift: maturity must be positive");
  const double half_var = 0.5 * law.sigma_j * law.sigma_j;
  const double k = std::expm1(law.mu_j + half_var);
  const double c_n = -intensity * k + n * (law.mu_j + half_var) / maturity;
  return {std::sqrt(v0 * v0 + n * law.sigma_j * law.sigma_j / maturity), r + c_n, c_n};
}

std::shared_ptr<const KouCoefficients> kou_coefficients(int n, const KouJumps& law) {
  if (n < 1) throw DomainError("kou_coefficients: n must be >= 1");
  return kou_cache().get(n, law);
}

double kou_convolution_density(int n, double u, const KouJumps& law) {
  const auto c = kou_coefficients(n, law);
  double sum = 0.0;
  if (u >= 0.0) {
    const double log_eta = std::log(law.eta1);
    if (u == 0.0) return c->log_p[1] == kNegInf ? 0.0 : std::exp(c->log_p[1] + log_eta);
    const double log_u = std::log(u);
    for (int k = 1; k <= n; ++k) {
      if (c->log_p[k] == kNegInf) continue;
      sum += std::exp(c->log_p[k] + k * log_eta + (k - 1) * log_u - std::lgamma(k) -
                      law.eta1 * u);
    }
  } else {
    const double log_eta = std::log(law.eta2);
    const double log_u = std::log(-u);
    for (int k = 1; k <= n; ++k) {
      if (c->log_q[k] == kNegInf) continue;
      sum += std::exp(c->log_q[k] + k * log_eta + (k - 1) * log_u - std::lgamma(k) +
                      law.eta2 * u);
    }
  }
  return sum;
}

double loguniform_convolution_density(int n, double u, const LogUniformJumps& law) {
  if (n < 1) throw DomainError("loguniform_convolution_density: n must be >= 1");
  const double width = law.b - law.a;
  if (u < n * law.a || u > n * law.b) return 0.0;
  const double z = (u - n * law.a) / width;
  const double ih = n <= kLogUniformDirectMaxN ? irwin_hall_direct(n, z)
                                               : irwin_hall_recurrence(n, z);
  return std::max(ih, 0.0) / width;
}

double jump_sum_density(int n, double u, const JumpShape& shape) {
  if (n < 1) throw DomainError("jump_sum_density: n must be >= 1");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LogNormalJumps>) {
          if (!(s.sigma_j > 0.0)) throw DomainError("jump_sum_density: point-mass law");
          const double sd = std::sqrt(static_cast<double>(n)) * s.sigma_j;
          const double z = (u - n * s.mu_j) / sd;
          return kInvSqrt2Pi * std::exp(-0.5 * z * z) / sd;
        } else if constexpr (std::is_same_v<T, KouJumps>) {
          return kou_convolution_density(n, u, s);
        } else {
          return loguniform_convolution_density(n, u, s);
        }
      },
      shape);
}

QuadratureConfig jump_quadrature_config() {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-13;
  cfg.rel_tol = 1e-10;
  cfg.max_subdivisions = 1000;
  return cfg;
}

double expect_over_jump_sum(int n, const JumpShape& shape, const RealFunction& h,
                            const QuadratureConfig& cfg) {
  if (n < 0) throw DomainError("expect_over_jump_sum: n must be >= 0");
  if (n == 0) return h(0.0);
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LogNormalJumps>) {
          const double mean = n * s.mu_j;
          if (!(s.sigma_j > 0.0)) return h(mean);
          // J_n = mean + sd * Z, Z standard normal
          const double sd = std::sqrt(static_cast<double>(n)) * s.sigma_j;
          const std::function<double(double)> weight = [](double z) {
            return kInvSqrt2Pi * std::exp(-0.5 * z * z);
          };
          const auto g = scaled(h, mean, sd, weight);
          return gk15_adaptive_lower_infinite(g, 0.0, cfg).value +
                 gk15_adaptive_upper_infinite(g, 0.0, cfg).value;
        } else if constexpr (std::is_same_v<T, KouJumps>) {
          // u = z / eta on each side of the discontinuity at 0
          const std::function<double(double)> up_weight = [&](double z) {
            return kou_convolution_density(n, z / s.eta1, s) / s.eta1;
          };
          const std::function<double(double)> down_weight = [&](double z) {
            return kou_convolution_density(n, z / s.eta2, s) / s.eta2;
          };
          const auto up = scaled(h, 0.0, 1.0 / s.eta1, up_weight);
          const auto down = scaled(h, 0.0, 1.0 / s.eta2, down_weight);
          return gk15_adaptive_upper_infinite(up, 0.0, cfg).value +
                 gk15_adaptive_lower_infinite(down, 0.0, cfg).value;
        } else {
          // piecewise polynomial density with knots at n a + i (b - a)
          const double width = s.b - s.a;
          auto integrand = [&](double u) {
            const double w = loguniform_convolution_density(n, u, s);
            return w == 0.0 ? 0.0 : h(u) * w;
          };
          double total = 0.0;
          for (int i = 0; i < n; ++i) {
            const double lo = n * s.a + i * width;
            total += gk15_adaptive(integrand, lo, lo + width, cfg).value;
          }
          return total;
        }
      },
      shape);
}

GnValues gn_generic(double x, int n, const JumpLaw& law, double v0, double r, double strike,
                    double maturity, const QuadratureConfig& cfg) {
  const double k = compensator_k(law);
  const double r_eff = r - law.intensity * k;
  const double discount = std::exp(-law.intensity * k * maturity);
  auto at = [&](double y) { return BsInputs{0.0, x + y, v0, strike, r_eff, maturity}; };
  if (n == 0) {
    const auto ops = bs_operators(at(0.0));
    return {discount * ops.price, discount * ops.gamma2, discount * ops.lambda_gamma};
  }
  const double g = expect_over_jump_sum(n, law.shape, [&](double y) { return bs_price(at(y)); }, cfg);
  const double g2 = expect_over_jump_sum(n, law.shape, [&](double y) { return gamma2_bs(at(y)); }, cfg);
  const double lg =
      expect_over_jump_sum(n, law.shape, [&](double y) { return lambda_gamma_bs(at(y)); }, cfg);
  return {discount * g, discount * g2, discount * lg};
}

}  // namespace svj
