#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tailcausal {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad level, wrong vertex, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Not enough observations (exceedances, quadrant points, rows) for an estimate.
class SampleSizeError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation (e.g. log of a nonpositive value).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical fit did not converge; the message carries the diagnostics.
class FitError : public Error {
 public:
  using Error::Error;
};

/// A matrix or weight configuration is numerically invalid (non-PSD, degenerate weights).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The edge set contains a directed cycle.
class CycleError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace tailcausal
