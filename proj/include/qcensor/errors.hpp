#pragma once

#include <stdexcept>
#include <string>

namespace qcensor {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes, subsystem indices or register layouts that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix that was required to be a density operator (or Hermitian) is not.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The request is well formed but outside what is implemented.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcensor
