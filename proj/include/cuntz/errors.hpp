#pragma once

#include <stdexcept>
#include <string>

namespace cuntz {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (group specs, action files, set expressions).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A declared resource limit would be exceeded. Never a silent truncation.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// Operands live over different groups or actions, or an index is out of range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The operation has no finite answer for an infinite dual group.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition does not hold. `witness` names the offending
/// element when there is one.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, std::string witness = {})
      : Error(what), witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

}  // namespace cuntz
