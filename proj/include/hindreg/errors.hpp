#pragma once

#include <stdexcept>
#include <string>

namespace hindreg {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value (sum, tuple element, table index) fell outside a coloring's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Fixed-width arithmetic would have wrapped.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// An instance, solution or file failed its validator. The message carries
// the witness.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A finite solution is too short to carry out an extraction, or a query lies
// outside the window the solution certifies.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Raised on paths that cannot be reached on valid inputs if the underlying
// combinatorial argument is correct. Seeing one means a bug.
class InternalContradiction : public Error {
 public:
  using Error::Error;
};

}  // namespace hindreg
