#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kbqa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `position()` is a byte offset for in-memory text
/// and a 1-based line number for line-oriented files (see `is_line()`).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position, bool is_line = false)
      : Error(format(message, position, is_line)), position_(position), is_line_(is_line) {}

  std::size_t position() const noexcept { return position_; }
  bool is_line() const noexcept { return is_line_; }

 private:
  static std::string format(const std::string& message, std::size_t position, bool is_line) {
    return (is_line ? "line " : "offset ") + std::to_string(position) + ": " + message;
  }

  std::size_t position_;
  bool is_line_;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

/// Bad or inconsistent data (unknown entities in strict mode, bad dumps).
class DataError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Token or schema name that the decoder vocabulary cannot represent.
class TokenizeError : public Error {
 public:
  using Error::Error;
};

/// Failure talking to a scorer (external process died, timed out, or spoke
/// the wrong protocol).
class ScorerError : public Error {
 public:
  using Error::Error;
};

}  // namespace kbqa
