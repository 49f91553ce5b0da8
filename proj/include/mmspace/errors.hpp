#pragma once

#include <stdexcept>
#include <string>

namespace mms {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed an out-of-range or inconsistent parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Argument lies outside the domain of a mathematical function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The graph does not model a metric measure space (disconnected, bad weights...).
class SpaceError : public Error {
 public:
  using Error::Error;
};

// Malformed space file or zoo string.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Exact search would exceed the allowed budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// Component labelling for the three-point line test could not be made.
class LabelingError : public Error {
 public:
  LabelingError(std::string convention, const std::string& what)
      : Error(what), convention_(std::move(convention)) {}
  const std::string& convention() const { return convention_; }

 private:
  std::string convention_;
};

}  // namespace mms
