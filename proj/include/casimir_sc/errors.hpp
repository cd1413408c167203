#pragma once

#include <stdexcept>
#include <string>

namespace casimir_sc {

// Argument outside the physical domain of an operation (e.g. T > T_c for the gap).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Quadrature or series failed to reach the requested tolerance.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double error_estimate, long terms_used = -1)
      : std::runtime_error(what), error_estimate_(error_estimate), terms_used_(terms_used) {}

  double error_estimate() const noexcept { return error_estimate_; }
  long terms_used() const noexcept { return terms_used_; }

 private:
  double error_estimate_;
  long terms_used_;
};

// Malformed or out-of-range configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace casimir_sc
