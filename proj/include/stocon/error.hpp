#pragma once

#include <stdexcept>
#include <string>

namespace stocon {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document (JSON, PNML, XES).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input parsed, but violates a domain invariant (e.g. distribution sum).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An operation's precondition does not hold (e.g. firing a disabled transition).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A configured size limit (node cap, realization cap) was exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// The final marking of the product is unreachable.
class NoAlignmentError : public Error {
 public:
  using Error::Error;
};

/// Input uses a format feature outside the supported subset.
class UnsupportedFeatureError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace stocon
