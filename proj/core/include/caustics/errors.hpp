#pragma once

#include <stdexcept>
#include <string>

namespace caustics {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed polynomial / point text.  Carries a 0-based position into the input.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t pos)
      : Error(what + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
  std::size_t position() const { return pos_; }

private:
  std::size_t pos_;
};

/// Arithmetic violation: division by zero, mixed extension moduli, ...
class ArithmeticError : public Error {
public:
  using Error::Error;
};

/// A computation would need a second level of algebraic extension.
class ExtensionTowerError : public Error {
public:
  ExtensionTowerError() : Error("extension tower exceeded") {}
  explicit ExtensionTowerError(const std::string& what) : Error(what) {}
};

/// Geometric precondition violated (degenerate input to a geometric op).
class DegenerateError : public Error {
public:
  using Error::Error;
};

/// Series truncation bound reached before the requested quantity stabilized.
class TruncationError : public Error {
public:
  using Error::Error;
};

/// Elimination / implicitization failed (chart failures, degenerate image, ...).
class EliminationError : public Error {
public:
  using Error::Error;
};

/// Numeric routine failed to converge or stabilize.
class NumericError : public Error {
public:
  using Error::Error;
};

}  // namespace caustics
