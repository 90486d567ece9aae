#pragma once

#include <stdexcept>
#include <string>

namespace ac {

/// Mismatched grid specs passed to a binary operation.
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation outside the admissible interval (e.g. logarithmic potential
/// at |x| >= 1). Carries the offending value; upstream this signals a
/// maximum-bound violation.
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& msg, double value)
      : std::runtime_error(msg), value_(value) {}
  double value() const { return value_; }

 private:
  double value_;
};

/// Adjacent stepsize ratio exceeded the active policy bound.
class RatioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid scalar parameter (nonpositive stepsize, eta outside its window, ...).
class ParamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or missing configuration key. The message names the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time step could not be completed (auxiliary-variable overflow,
/// non-finite field, or a domain error mid-step). Carries step metadata.
class StepError : public std::runtime_error {
 public:
  StepError(const std::string& msg, int step_index, double time)
      : std::runtime_error(msg), step_index_(step_index), time_(time) {}
  int step_index() const { return step_index_; }
  double time() const { return time_; }

 private:
  int step_index_;
  double time_;
};

}  // namespace ac
