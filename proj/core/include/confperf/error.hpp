#pragma once

#include <stdexcept>
#include <string>

namespace confperf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid input data (bad CSV cells, arity mismatches, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied parameter is outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A computation could not produce a result (degenerate geometry, no
/// feasible configuration, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace confperf
