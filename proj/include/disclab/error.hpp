#pragma once

#include <stdexcept>
#include <string>

namespace disclab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (index out of range, empty
/// window, bad generator parameter).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A real argument lies outside the domain a formula is defined on.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A point file could not be read; the message names the offending record.
class IngestionError : public Error {
 public:
  using Error::Error;
};

/// A requested shape (Q-part, tiling) cannot be built with the given data.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace disclab
