#pragma once

#include <stdexcept>
#include <string>

namespace dialscore {

// Bad input: missing files, malformed records, broken config. CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Results failed a validation gate (e.g. too many scorer exclusions). Exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Correlation over a constant series has no defined value.
class ConstantSeriesError : public std::runtime_error {
 public:
  explicit ConstantSeriesError(const std::string& msg) : std::runtime_error(msg) {}
};

// External scorer / LLM endpoint failures after retries.
class WireError : public std::runtime_error {
 public:
  explicit WireError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dialscore
