#pragma once

#include <stdexcept>
#include <string>

namespace opmetric {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite entries, out-of-range parameters, violated preconditions.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Ragged block grids and incompatible operand shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed space-definition or report documents.
class ParseError : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// A norm above level 1 was requested from a space that only knows its level-1 norm.
class UnsupportedLevel : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace opmetric
