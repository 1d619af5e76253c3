#pragma once

#include <stdexcept>
#include <string>

namespace skfb {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of two operands disagree, or a shape violates an operation's precondition.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An index or window falls outside the array it addresses.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Invalid user-supplied parameter or configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A metric is undefined on the given data (zero mean, zero variance, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class ZeroMeanRegion : public DegenerateError {
 public:
  ZeroMeanRegion() : DegenerateError("region mean is zero; metric undefined") {}
};

class ZeroSIOriginal : public DegenerateError {
 public:
  ZeroSIOriginal()
      : DegenerateError("speckle index of original region is zero; SSI undefined") {}
};

}  // namespace skfb
