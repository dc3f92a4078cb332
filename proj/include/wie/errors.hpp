#pragma once

#include <stdexcept>
#include <string>

namespace wie {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input/configuration problems. The CLI maps these to exit status 2.
class ShapeError : public Error {
 public:
  using Error::Error;
};
class ParameterError : public Error {
 public:
  using Error::Error;
};
class InputError : public Error {
 public:
  using Error::Error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Numerical failures. The CLI maps these to exit status 3.
class ConstraintError : public Error {
 public:
  using Error::Error;
};
class SingularityError : public Error {
 public:
  using Error::Error;
};
class ForcingError : public Error {
 public:
  using Error::Error;
};
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};
class TailToleranceError : public Error {
 public:
  using Error::Error;
};
class RangeError : public Error {
 public:
  using Error::Error;
};
class OptimizerError : public Error {
 public:
  using Error::Error;
};
class InstabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace wie
