#pragma once

#include <stdexcept>
#include <string>

namespace splitcount {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed endofunction input (empty, non-integer token, image out of range).
struct ParseError : Error {
  using Error::Error;
};

struct ImageOutOfRange : ParseError {
  int position;  // 1-indexed token position
  long long value;
  ImageOutOfRange(int pos, long long val)
      : ParseError("image out of range at position " + std::to_string(pos) +
                   ": " + std::to_string(val)),
        position(pos),
        value(val) {}
};

struct EmptyInput : ParseError {
  EmptyInput() : ParseError("empty input") {}
};

struct NonIntegerToken : ParseError {
  explicit NonIntegerToken(const std::string& token)
      : ParseError("non-integer token: '" + token + "'") {}
};

/// d < 1, or d does not divide n where divisibility is required.
struct InvalidD : Error {
  using Error::Error;
};

/// The d = 2 theorem check needs an even domain size.
struct OddN : Error {
  using Error::Error;
};

/// A brute-force enumeration would exceed its configured cap.
struct CapExceeded : Error {
  using Error::Error;
};

/// n^n does not fit in the 64-bit enumeration index.
struct OverflowGuard : Error {
  using Error::Error;
};

/// Operands live in polynomial rings with different variable counts.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// Cyclotomic operands have different root orders.
struct OrderMismatch : Error {
  using Error::Error;
};

/// Operation requires a component whose cycle has length 1.
struct NotATree : Error {
  using Error::Error;
};

/// complete_homogeneous with k >= 1 needs at least one variable.
struct NoVariables : Error {
  using Error::Error;
};

}  // namespace splitcount
