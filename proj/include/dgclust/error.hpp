#pragma once

#include <stdexcept>
#include <string>

namespace dgclust {

// Base of every error raised by the library. The CLI maps the subclasses
// onto process exit codes (config -> 2, numeric -> 3, io -> 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace dgclust
