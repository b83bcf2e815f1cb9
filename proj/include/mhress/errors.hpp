#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mhress {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& message)
      : Error("syntax error at offset " + std::to_string(offset) + ": " + message),
        offset_(offset),
        message_(message) {}

  std::size_t offset() const { return offset_; }
  const std::string& detail() const { return message_; }

 private:
  std::size_t offset_;
  std::string message_;
};

class UnknownIdentifier : public Error {
 public:
  explicit UnknownIdentifier(const std::string& name)
      : Error("unknown identifier '" + name + "'"), name_(name) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// A function was applied outside its domain (log of a non-positive value,
/// sqrt of a negative value, division by zero, non-positive density).
class DomainError : public Error {
 public:
  DomainError(const std::string& function, double argument)
      : Error("domain error in " + function + "(" + std::to_string(argument) + ")"),
        function_(function),
        argument_(argument) {}

  const std::string& function() const { return function_; }
  double argument() const { return argument_; }

 private:
  std::string function_;
  double argument_;
};

/// Invalid model or configuration supplied by the user.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed in a way that points at an implementation
/// defect or an unusable input (asymmetry, stagnation, sweep cap).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mhress

namespace mhress {

/// The hypotheses of an asymptotic result do not hold for the given models
/// (e.g. an asymmetric proposal or an unavailable tail ratio).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

}  // namespace mhress
