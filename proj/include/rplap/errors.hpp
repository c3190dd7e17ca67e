#pragma once

#include <stdexcept>
#include <string>

namespace rplap {

// Argument outside the domain of a map (radius beyond the horizon, etc.).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Division by psi(r) = 0.
class SingularPointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A caller violated a documented precondition (support, parameter range).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// |f(s)| exceeded the saturation level or became non-finite.
class SaturationError : public std::overflow_error {
 public:
  SaturationError(const std::string& what, double argument)
      : std::overflow_error(what), argument_(argument) {}
  double argument() const { return argument_; }

 private:
  double argument_;
};

// Generic numerical failure (non-finite data, iteration limits).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NewtonDivergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The minimal-solution recursion diverged where a solution was required.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rplap
