#pragma once

#include <cstddef>
#include <functional>

namespace svj {

/// Adaptive 7-point Gauss / 15-point Kronrod quadrature settings.
struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  std::size_t max_subdivisions = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
  std::size_t evaluations = 0;
};

using RealFunction = std::function<double(double)>;

/// Globally adaptive GK15 on [a, b]: bisects the interval with the largest
/// error estimate until the total error is <= max(abs_tol, rel_tol*|value|).
/// Throws QuadratureError (carrying the best estimate) when the subdivision
/// limit is reached first, DomainError on an invalid interval or config.
QuadratureResult gk15_adaptive(const RealFunction& f, double a, double b,
                               const QuadratureConfig& cfg = {});

/// int_a^inf f(x) dx via x = a + (1 - s)/s, s in (0, 1].
QuadratureResult gk15_adaptive_upper_infinite(const RealFunction& f, double a,
                                              const QuadratureConfig& cfg = {});

/// int_-inf^b f(x) dx via x = b - (1 - s)/s.
QuadratureResult gk15_adaptive_lower_infinite(const RealFunction& f, double b,
                                              const QuadratureConfig& cfg = {});

}  // namespace svj
