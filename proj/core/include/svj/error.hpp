#pragma once

#include <stdexcept>
#include <string>

namespace svj {

/// Input outside the domain where a formula is defined (y*sqrt(tau) == 0,
/// eta1 <= 1 for Kou, a >= b for log-uniform, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature hit its subdivision limit. Carries the best estimate
/// and the error estimate achieved when it gave up.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}

  double estimate() const noexcept { return estimate_; }
  double error() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

/// The Poisson series would need more terms than the hard cap allows.
class SeriesTruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Implied volatility inversion has no solution inside the search bracket.
class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace svj
