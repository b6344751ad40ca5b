#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mwc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No set or partition satisfies the instance constraints.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its size cap or budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The norm lacks the oracle an operation asked for.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Every randomized trial was rejected (a terminal stayed uncovered).
class AllTrialsRejected : public Error {
 public:
  using Error::Error;
};

/// A runtime-checked invariant failed. Indicates a bug, never bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed instance text, positioned at a 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

inline void require(bool condition, const char* what) {
  if (!condition) throw InvariantViolation(what);
}

}  // namespace detail

}  // namespace mwc
