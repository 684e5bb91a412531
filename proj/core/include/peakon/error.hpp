#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace peakon {

/// Base of every error raised by the library. The CLI catches this type and
/// maps it to an exit code, so nothing in the library aborts the process.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Unbound parameter or a domain violation (division by zero, log/sqrt of a
/// negative number, non-real power).
class EvalError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// f0/g0 requested at the origin where the limit does not exist.
class SingularOriginError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace peakon
