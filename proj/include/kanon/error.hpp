#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kanon {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Unknown node id or label.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Bad parameter or configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The requested anonymization cannot be satisfied on this graph.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A metric has no value on the given input (e.g. path length of a 1-node graph).
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

}  // namespace kanon
