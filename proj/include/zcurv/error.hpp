#pragma once

#include <stdexcept>
#include <string>

namespace zcurv {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input. Carries a 1-based line/column when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"
                       : what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Violated precondition of a mathematical operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value produced by a floating-point computation.
class NumericsError : public Error {
 public:
  using Error::Error;
};

}  // namespace zcurv
