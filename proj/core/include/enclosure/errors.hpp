#pragma once

#include <stdexcept>
#include <string>

namespace enclosure {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numeric computation produced a non-finite value or failed to converge.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

/// Something that cannot happen for valid inputs (e.g. a singular Dirichlet Laplacian).
class InternalFault : public Error {
 public:
  using Error::Error;
};

}  // namespace enclosure
