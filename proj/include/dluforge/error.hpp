#pragma once

#include <stdexcept>
#include <string>

namespace dluforge {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite input to an activation, or a target evaluated off its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix dimensions that do not chain.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A constructor parameter outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized document. `where` is a byte offset or JSON pointer.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string where)
      : Error(what + " (at " + where + ")"), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// A compiler could not produce a network (e.g. a denominator
/// with a root on the domain).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Operation not defined for the given network (e.g. breakpoint extraction on
/// a DLU network).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace dluforge
