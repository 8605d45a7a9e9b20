#pragma once

#include <stdexcept>
#include <string>

namespace freqshape {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates a documented precondition (H <= 0, b_hat <= 0, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class RhoOutOfRange : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

/// Polynomial algebra produced a zero denominator.
class AlgebraicDegeneracy : public Error {
 public:
  using Error::Error;
};

class DegreeZero : public Error {
 public:
  using Error::Error;
};

class ImproperSystem : public Error {
 public:
  using Error::Error;
};

class UnstableSystem : public Error {
 public:
  using Error::Error;
};

/// A computed result violates a property the algorithm asserts.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class CalibrationDiverged : public Error {
 public:
  using Error::Error;
};

}  // namespace freqshape
