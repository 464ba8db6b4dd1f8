#pragma once

#include <stdexcept>
#include <string>

namespace emailnet {

// Process exit codes shared by the CLI and the error hierarchy below.
enum class ExitCode : int { ok = 0, usage = 1, io = 2, degenerate = 3 };

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ExitCode::usage, what) {}
};

// Bad weights, empty anonymization key, unparsable config files.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::usage, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ExitCode::io, what) {}
};

// A metric is undefined on the given input (empty network, tiny component).
class UndefinedValueError : public Error {
 public:
  explicit UndefinedValueError(const std::string& what)
      : Error(ExitCode::degenerate, what) {}
};

class FitImpossibleError : public Error {
 public:
  explicit FitImpossibleError(const std::string& what)
      : Error(ExitCode::degenerate, what) {}
};

}  // namespace emailnet
