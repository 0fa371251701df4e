#pragma once

#include <stdexcept>
#include <string>

namespace scaling {

// Base for every recoverable error raised by the library. The CLI maps these
// to exit code 1; usage problems are handled separately (exit code 2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace scaling
