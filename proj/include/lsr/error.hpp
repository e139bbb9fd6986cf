#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lsr {

/// Base of every error thrown by the library. `kind()` is a stable,
/// machine-readable tag used by the CLI error line.
class Error : public std::runtime_error {
 public:
  Error(std::string_view kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  std::string_view kind() const noexcept { return kind_; }

 private:
  std::string_view kind_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& m) : Error("shape_error", m) {}
};

class StateError : public Error {
 public:
  explicit StateError(const std::string& m) : Error("state_error", m) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& m) : Error("numeric_error", m) {}
};

/// Violated precondition on an argument value (alpha out of range, zero
/// weight vector, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& m) : Error("domain_error", m) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& m) : Error("convergence_error", m) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& m) : Error("parse_error", m) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error("config_error", m) {}
};

}  // namespace lsr
