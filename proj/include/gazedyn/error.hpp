#pragma once

#include <stdexcept>
#include <string>

namespace gazedyn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A label, file or field could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Inputs violate an operation's precondition (sizes, margins, configs).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A covariance stayed non positive definite after regularization.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gazedyn
