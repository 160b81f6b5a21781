#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace le2e {

enum class ErrorKind { Config, Input, Format, Data, Io };

// Base error; `module()` names the component that raised it so the CLI can
// report "error [vocoder]: ..." without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message)
      : std::runtime_error(message), kind_(kind), module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string module, const std::string& message)
      : Error(ErrorKind::Config, std::move(module), message) {}
};

class InputError : public Error {
 public:
  InputError(std::string module, const std::string& message)
      : Error(ErrorKind::Input, std::move(module), message) {}
};

class FormatError : public Error {
 public:
  FormatError(std::string module, std::uint64_t offset, const std::string& message)
      : Error(ErrorKind::Format, std::move(module),
              message + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

class DataError : public Error {
 public:
  DataError(std::string module, const std::string& message)
      : Error(ErrorKind::Data, std::move(module), message) {}
};

class IoError : public Error {
 public:
  IoError(std::string module, const std::string& message)
      : Error(ErrorKind::Io, std::move(module), message) {}
};

}  // namespace le2e
