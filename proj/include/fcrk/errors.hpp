#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fcrk {

/// A solution value was requested outside the interval where it is defined.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, double t, double lo, double hi)
      : std::domain_error(what), t_(t), lo_(lo), hi_(hi) {}
  double time() const noexcept { return t_; }
  double lower() const noexcept { return lo_; }
  double upper() const noexcept { return hi_; }

 private:
  double t_, lo_, hi_;
};

/// The right-hand side asked a stage function for a value beyond σ + c_i·h.
class OverlapDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::invalid_argument(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A stage value came out non-finite.
class NumericalBlowup : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure inside a step; carries the step index and start time.
class IntegrationError : public std::runtime_error {
 public:
  enum class Cause { rhs, domain, blowup };

  IntegrationError(Cause cause, std::size_t step, double sigma, const std::string& detail);

  Cause cause() const noexcept { return cause_; }
  std::size_t step() const noexcept { return step_; }
  double sigma() const noexcept { return sigma_; }

 private:
  Cause cause_;
  std::size_t step_;
  double sigma_;
};

}  // namespace fcrk
