#pragma once

#include <stdexcept>
#include <string>

namespace hfclt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside its admissible range. The message names the parameter.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A file or document does not match the expected schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A requested computation would exceed a configured memory or work budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The frequency lies outside the support of the requested convolution power.
class UnachievableFrequency : public Error {
 public:
  using Error::Error;
};

/// The frequency is inside the structural support, but the value underflowed to zero.
class NumericalUnderflow : public Error {
 public:
  using Error::Error;
};

}  // namespace hfclt
