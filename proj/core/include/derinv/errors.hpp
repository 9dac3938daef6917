#pragma once

#include <stdexcept>
#include <string>

namespace derinv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands disagree on field, precision or matrix shape.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Not enough p-adic digits to decide the answer.
class PrecisionError : public Error {
 public:
  PrecisionError(const std::string& what, int needed)
      : Error(what), needed_(needed) {}
  // Smallest precision that would resolve the question, or -1 if unknown.
  int needed() const { return needed_; }

 private:
  int needed_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// An explicit R-module presentation whose maps do not respect annihilators.
class PresentationError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// A computation needs a profile field that was not supplied.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace derinv
