#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vnlab {

/// Raised when an argument violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the text readers; carries the 1-based line that failed.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An exhaustive routine was asked to run above its configured size cap.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// The Bayes scheme was queried on a pair outside its distribution's support.
class UndefinedConditional : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace vnlab
