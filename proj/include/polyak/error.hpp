#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polyak {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  DimensionError(std::size_t expected, std::size_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

/// Invalid construction parameters or violated metadata.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Raised by a step-size rule when its precondition fails at an iterate.
/// The optimizer re-raises it with the iteration index attached.
class ScheduleError : public Error {
 public:
  explicit ScheduleError(const std::string& what, long iteration = -1)
      : Error(iteration < 0 ? what
                            : what + " (at iteration " +
                                  std::to_string(iteration) + ")"),
        reason_(what),
        iteration_(iteration) {}

  const std::string& reason() const noexcept { return reason_; }
  long iteration() const noexcept { return iteration_; }

 private:
  std::string reason_;
  long iteration_;
};

/// Configuration errors. `line` is 0 for semantic errors that are not tied
/// to a single line of input.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace polyak
