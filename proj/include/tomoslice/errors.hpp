#pragma once

#include <stdexcept>
#include <string>

namespace tomoslice {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Support function is +inf in the requested direction (unbounded body).
class InfiniteSupport : public Error {
 public:
  using Error::Error;
};

/// Hyperplane slice of an unbounded body is itself unbounded.
class UnboundedSlice : public Error {
 public:
  using Error::Error;
};

/// Least-squares design matrix does not have full column rank.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// Section value fell below the representable range during a log-regression.
class Underflow : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(int expected, int got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

}  // namespace tomoslice
