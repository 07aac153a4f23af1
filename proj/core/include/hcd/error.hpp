#pragma once

#include <stdexcept>
#include <string>

namespace hcd {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or otherwise malformed numeric input.
class InputError : public Error {
 public:
  using Error::Error;
};

// Dictionary columns that are zero or not unit-norm when unit norm is required.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

// Invalid parameter or generator settings.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Exhaustive oracle refused an instance outside its combinatorial budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class SingularSystemError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hcd
