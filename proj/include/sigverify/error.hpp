#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sigverify {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number of the offending line
/// (0 when the problem is not tied to a single line).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        source_(source),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// A domain invariant does not hold (bad shapes, out-of-range parameters, degenerate data).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace sigverify
