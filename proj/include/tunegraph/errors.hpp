#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tunegraph {

// Invalid model parameters or precondition violations on library inputs.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation is not defined on the given graph (e.g. no edges).
class GraphError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public IoError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : IoError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace tunegraph
