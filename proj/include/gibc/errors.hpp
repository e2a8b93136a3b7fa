#pragma once

#include <stdexcept>
#include <string>

namespace gibc {

enum class ErrorKind {
  invalid_input,
  numerical_failure,
  invariant_violation,
  io_failure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorKind::invalid_input, what) {}
};

class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what) : Error(ErrorKind::numerical_failure, what) {}
};

class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what) : Error(ErrorKind::invariant_violation, what) {}
};

class IoFailure : public Error {
 public:
  explicit IoFailure(const std::string& what) : Error(ErrorKind::io_failure, what) {}
};

}  // namespace gibc
