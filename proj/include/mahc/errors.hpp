#pragma once

#include <stdexcept>
#include <string>

namespace mahc {

/// Input violated a documented precondition (dimension mismatch, bad range, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Normal matrix of a least-squares system is singular or too ill-conditioned.
class SingularSystem : public std::runtime_error {
 public:
  SingularSystem(const std::string& what, double condition)
      : std::runtime_error(what + " (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Fewer encoded results than original rows were supplied to the decoder.
class InsufficientResults : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateTask : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyBuffer : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration problem; the message carries the offending key path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mahc
