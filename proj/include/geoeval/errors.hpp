#pragma once

#include <stdexcept>
#include <string>

namespace geoeval {

// Base of every error thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// File or header structure is wrong (bad column count, bad header, ...).
struct ParseError : Error {
  using Error::Error;
};

// A field holds an unusable value (non-numeric, non-finite, bad label).
struct ValueError : Error {
  using Error::Error;
};

// A (row,col) cell appears twice in one input.
struct DuplicateCellError : Error {
  using Error::Error;
};

// A location is out of range, masked, or repeated in a selection.
struct LocationError : Error {
  using Error::Error;
};

// Matrix/model dimensions do not line up.
struct ShapeError : Error {
  using Error::Error;
};

// A scalar argument is outside its documented domain.
struct RangeError : Error {
  using Error::Error;
};

// Too few rows/labels/cells to perform the operation.
struct InsufficientDataError : Error {
  using Error::Error;
};

// ROC-AUC is undefined because only one label is present.
struct UndefinedAucError : Error {
  using Error::Error;
};

// A configuration file or CLI option failed validation.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace geoeval
