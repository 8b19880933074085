#pragma once

#include <stdexcept>
#include <string>

namespace mrgnn {

/// Error categories map onto CLI exit codes.
enum class ErrorKind { InvalidInput = 2, Parse = 3, Capacity = 4, Io = 5, Numeric = 6 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& what) : Error(ErrorKind::InvalidInput, what) {}
};

struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised when an instance exceeds the annealer's variable limit.
struct CapacityError : Error {
  CapacityError(std::size_t n, std::size_t limit)
      : Error(ErrorKind::Capacity, "instance has " + std::to_string(n) +
                                       " variables, annealer limit is " + std::to_string(limit)) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

const char* kind_name(ErrorKind kind) noexcept;

}  // namespace mrgnn
