#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tpctf {

// Base of every exception thrown by the core library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters: bank constraints, schedule values, grid sizes.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Shape or band mismatch between objects that must agree.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Input data that makes the requested computation meaningless
// (e.g. nothing observed, all-missing masks).
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents; offset is the byte at which parsing failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        message_(what),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }
  // Message without the offset suffix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t offset_;
};

}  // namespace tpctf
