#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tagtrace {

enum class ErrorKind {
  io,
  empty_input,
  configuration,
  cold_start,
  capacity,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure the library reports. `kind()` is stable and
/// machine-readable; `what()` carries the human message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorKind::io, message) {}
};

class EmptyInputError : public Error {
 public:
  explicit EmptyInputError(const std::string& message)
      : Error(ErrorKind::empty_input, message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorKind::configuration, message) {}
};

class ColdStartError : public Error {
 public:
  explicit ColdStartError(const std::string& message)
      : Error(ErrorKind::cold_start, message) {}
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& message)
      : Error(ErrorKind::capacity, message) {}
};

}  // namespace tagtrace
