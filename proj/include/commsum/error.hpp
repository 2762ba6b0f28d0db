#pragma once

#include <stdexcept>
#include <string>

namespace commsum {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation (r <= 0, theta <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold for the inputs.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to converge or reach its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document. `where` names the line or field at fault.
class ParseError : public Error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : Error(where + ": " + what), where_(where) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace commsum
