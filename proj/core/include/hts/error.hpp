#pragma once

#include <stdexcept>
#include <string>

namespace hts {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration value.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Graph structure violates an invariant (cycle, self-edge, bad layering).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Data cannot support the requested computation (constant column, too few rows).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

/// A linear solve failed even after regularization.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hts
