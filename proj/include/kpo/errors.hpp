#pragma once

#include <stdexcept>
#include <string>

namespace kpo {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition or type invariant (bad density, non-symmetric J, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Refusal to run an exponential-cost operation past its size guard.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

// NaN, Inf or an amplitude past the blowup bound during integration.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class EigenSolverError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Requested the above-threshold steady state of a KPO that is below threshold.
class BelowThresholdError : public Error {
 public:
  using Error::Error;
};

// Spin readout of an oscillator whose amplitude is at or below the floor.
class UndefinedSpinError : public Error {
 public:
  using Error::Error;
};

// Eigenvector with a (near-)zero component: its sign pattern is ill-defined.
class AmbiguousSignError : public Error {
 public:
  using Error::Error;
};

// Configuration file problems: missing file, syntax, unknown key, bad value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kpo
