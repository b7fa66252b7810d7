#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace f2aut {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed word text. `position` is the zero-based index of the offending character.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position(position) {}
  std::size_t position;
};

/// Image pair that does not form a basis of F2.
struct InvalidAutomorphism : Error {
  using Error::Error;
};

/// Input outside an operation's domain, e.g. a zero cyclic length where a ratio is needed.
struct InvalidInput : Error {
  using Error::Error;
};

/// A configured size or depth guard was exceeded.
struct ResourceError : Error {
  using Error::Error;
};

/// An operation was called in a state its contract forbids.
struct ContractViolation : Error {
  using Error::Error;
};

}  // namespace f2aut
