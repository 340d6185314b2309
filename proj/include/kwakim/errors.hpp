#pragma once

#include <stdexcept>
#include <string>

namespace kwakim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar parameter is outside its admissible range (non-positive
/// eigenvalue, negative tolerance, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A container has too few entries (e.g. a ladder with N < 2).
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Two vectors or states disagree in length.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A gap index is out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// lambda_n >= lambda_{n+1} where a strict gap is required.
class DegenerateGapError : public Error {
 public:
  using Error::Error;
};

/// The weight exponent coincides with an eigenvalue.
class ResonanceError : public Error {
 public:
  using Error::Error;
};

/// Time integration produced a non-finite value.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : Error(what + " (first bad step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// A fixed-point iteration failed to contract or to converge.
class NoContractionError : public Error {
 public:
  using Error::Error;
};

/// Low-mode data carries nonzero high-mode entries.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// A numerical demonstration could not reach a verdict.
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (expression grammar, config documents).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace kwakim
