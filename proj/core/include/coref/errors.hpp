#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coref {

/// Malformed user input: functor expressions, coalgebra files, generator parameters.
/// Line and column are 1-based; 0 means "not tied to a source position".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(line == 0 ? message
                                     : std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        message_(message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

/// A refinement interface was handed a label, weight, or type value of the wrong kind.
class InterfaceMisuse : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An internal invariant of the refinement engine was found violated.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace coref
