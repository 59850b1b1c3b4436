#pragma once

#include <stdexcept>
#include <string>

namespace twirlkit {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NotHermitianError : public Error {
 public:
  using Error::Error;
};

class NotUnitaryError : public Error {
 public:
  using Error::Error;
};

class SingularInputError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class BadTargetsError : public Error {
 public:
  using Error::Error;
};

class ControlOverlapError : public Error {
 public:
  using Error::Error;
};

class ZeroProbabilityError : public Error {
 public:
  using Error::Error;
};

class EmptyBinError : public Error {
 public:
  using Error::Error;
};

class InvalidParamsError : public Error {
 public:
  using Error::Error;
};

class TooManyQubitsError : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailureError : public Error {
 public:
  ConvergenceFailureError(const std::string& what, double achieved_variance)
      : Error(what), achieved_variance(achieved_variance) {}
  double achieved_variance = 0.0;
};

class RankDeficientError : public Error {
 public:
  using Error::Error;
};

class NotOrthogonalError : public Error {
 public:
  using Error::Error;
};

class MissingStatesError : public Error {
 public:
  using Error::Error;
};

class BadIndexError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace twirlkit
