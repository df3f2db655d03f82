#pragma once

// Test-side numerical tools that share no code with the library: composite
// Gauss-Legendre quadrature (nodes by Newton iteration on P_n), numerical
// convolution, and a few statistics helpers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      nodes[i] = z;
      weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

inline const GaussLegendre& gl32() {
  static const GaussLegendre g(32);
  return g;
}

/// Composite 32-point Gauss-Legendre over `panels` equal panels of [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        int panels = 64) {
  const auto& g = gl32();
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(mid + 0.5 * h * g.nodes[i]);
    total += 0.5 * h * s;
  }
  return total;
}

/// Sum of integrate() over consecutive breakpoints.
inline double integrate_pieces(const std::function<double(double)>& f, std::vector<double> pts,
                               int panels = 64) {
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] > pts[i]) total += integrate(f, pts[i], pts[i + 1], panels);
  }
  return total;
}

/// (f * g)(u) = int f(y) g(u - y) dy over [lo, hi] with extra breakpoints.
inline double convolve(const std::function<double(double)>& f,
                       const std::function<double(double)>& g, double u, double lo, double hi,
                       std::vector<double> breaks = {}, int panels = 64) {
  breaks.push_back(lo);
  breaks.push_back(hi);
  for (double& b : breaks) b = std::clamp(b, lo, hi);
  return integrate_pieces([&](double y) { return f(y) * g(u - y); }, breaks, panels);
}

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Kolmogorov-Smirnov statistic of a sample against a continuous CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

}  // namespace oracle
