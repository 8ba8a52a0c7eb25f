#pragma once

#include <stdexcept>
#include <string>

namespace cxsplit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown registry identifier.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Malformed scheme file, potential table or config file.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Coefficients that violate consistency or a declared structural tag.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Bisection bracket without a threshold crossing.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Principal matrix logarithm undefined (eigenvalue on the negative real axis).
class BranchError : public Error {
 public:
  using Error::Error;
};

/// Numerical blow-up, or a step too large for the requested construction.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace cxsplit
