#pragma once

#include <stdexcept>
#include <string>

namespace qseries {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different exponent lattices.
class LatticeMismatch : public Error {
 public:
  using Error::Error;
};

/// An exponent is not representable on the current lattice.
class RefineLattice : public Error {
 public:
  using Error::Error;
};

/// Coefficient requested at or above the truncation order.
class BeyondTruncation : public Error {
 public:
  using Error::Error;
};

/// Series is zero to its known order, so it cannot be inverted.
class NotInvertible : public Error {
 public:
  using Error::Error;
};

/// A denominator 1 - u q^k is the exact constant zero.
class Pole : public Error {
 public:
  using Error::Error;
};

/// A Pochhammer factor in a denominator vanishes.
class Degenerate : public Error {
 public:
  using Error::Error;
};

/// Theta function in a denominator is identically zero.
class ThetaZero : public Error {
 public:
  using Error::Error;
};

/// A summation does not converge as a formal series.
class NonConvergent : public Error {
 public:
  using Error::Error;
};

/// Input does not have the structure an operation requires.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Syntax error with the byte offset where parsing stopped.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace qseries
