#pragma once

#include <stdexcept>
#include <string>

namespace hmlam {

// Base class for every error raised by the library. The CLI maps the
// concrete subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad scene file, unknown generator, dimension mismatch.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A computation hit a degenerate configuration (e.g. |cz+d| ~ 0).
class NumericError : public Error {
 public:
  using Error::Error;
};

class NotHyperbolicError : public Error {
 public:
  using Error::Error;
};

class NoIntersectionError : public Error {
 public:
  using Error::Error;
};

// A configured size limit (word length, ball size, list size) was exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace hmlam
