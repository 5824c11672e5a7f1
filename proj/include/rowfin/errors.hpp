#pragma once

#include <stdexcept>
#include <string>

namespace rowfin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed ring spec, element text, word text, preorder DSL or matrix file.
class ParseError : public Error {
 public:
  using Error::Error;
};

class RingMismatch : public Error {
 public:
  using Error::Error;
};

/// A construction's own postcondition check failed. Never swallowed.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

/// An enumeration cap was hit before a definite answer was reached.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

/// A lazily enumerated set produced no new element within its probe budget.
class EnumerationStall : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace rowfin
