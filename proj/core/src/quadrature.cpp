#include "svj/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "svj/error.hpp"

namespace svj {

namespace {

// Kronrod abscissae on [0, 1]; odd indices are the Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gk15_rule(const RealFunction& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));
  }
  const double abs_half = std::abs(half);
  resasc *= abs_half;
  resabs *= abs_half;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  return {a, b, resk * half, err};
}

}  // namespace

QuadratureResult gk15_adaptive(const RealFunction& f, double a, double b,
                               const QuadratureConfig& cfg) {
  if (!(a < b)) throw DomainError("gk15_adaptive: requires a < b");
  if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0) || cfg.max_subdivisions < 1) {
    throw DomainError("gk15_adaptive: tolerances must be positive and max_subdivisions >= 1");
  }

  std::priority_queue<Segment> heap;
  Segment first = gk15_rule(f, a, b);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  std::size_t evaluations = 15;

  auto converged = [&] {
    return total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
  };

  while (!converged()) {
    if (heap.size() >= cfg.max_subdivisions) {
      throw QuadratureError("gk15_adaptive: subdivision limit reached", total, total_err);
    }
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw QuadratureError("gk15_adaptive: interval cannot be subdivided further", total,
                            total_err);
    }
    heap.pop();
    const Segment left = gk15_rule(f, worst.a, mid);
    const Segment right = gk15_rule(f, mid, worst.b);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from scratch so the running update's cancellation does not leak
  // into the reported value.
  double value = 0.0;
  double error = 0.0;
  const std::size_t intervals = heap.size();
  std::vector<Segment> segments;
  segments.reserve(intervals);
  while (!heap.empty()) {
    segments.push_back(heap.top());
    heap.pop();
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& l, const Segment& r) { return l.a < r.a; });
  for (const auto& s : segments) {
    value += s.value;
    error += s.error;
  }
  return {value, error, intervals, evaluations};
}

QuadratureResult gk15_adaptive_upper_infinite(const RealFunction& f, double a,
                                              const QuadratureConfig& cfg) {
  auto g = [&f, a](double s) {
    const double x = a + (1.0 - s) / s;
    if (!std::isfinite(x)) return 0.0;
    const double fx = f(x);
    return fx == 0.0 ? 0.0 : fx / (s * s);
  };
  return gk15_adaptive(g, 0.0, 1.0, cfg);
}

QuadratureResult gk15_adaptive_lower_infinite(const RealFunction& f, double b,
                                              const QuadratureConfig& cfg) {
  auto g = [&f, b](double s) {
    const double x = b - (1.0 - s) / s;
    if (!std::isfinite(x)) return 0.0;
    const double fx = f(x);
    return fx == 0.0 ? 0.0 : fx / (s * s);
  };
  return gk15_adaptive(g, 0.0, 1.0, cfg);
}

}  // namespace svj
