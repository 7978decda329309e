#pragma once

#include <stdexcept>
#include <string>

namespace mhdv {

/// Rejected input: configuration, arguments, preconditions.  CLI exit 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A run that had to stop.  CLI exit 2.
class RuntimeAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite coefficients after a step, or time-step collapse.
class NumericalBlowup : public RuntimeAbort {
 public:
  NumericalBlowup(const std::string& what, long long step) : RuntimeAbort(what), step_(step) {}
  long long step() const { return step_; }

 private:
  long long step_;
};

/// The energy budget was exceeded beyond tolerance.
class BoundViolation : public RuntimeAbort {
 public:
  using RuntimeAbort::RuntimeAbort;
};

class IoError : public RuntimeAbort {
 public:
  using RuntimeAbort::RuntimeAbort;
};

}  // namespace mhdv
