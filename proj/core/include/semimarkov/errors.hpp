#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semimarkov {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed graph text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A graph violates the invariants of its role (cycle, self-loop, bad marks, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its precondition (unknown vertex, missing edge, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A configured size bound was exceeded.
class BoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace semimarkov
