#pragma once

#include <stdexcept>
#include <string>

namespace repgraph {

// Bad user input (CLI exit code 2).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file contents (CLI exit code 2).
class ParseError : public InputError {
 public:
  explicit ParseError(const std::string& what) : InputError(what) {}
};

// A pipeline stage failed on valid input (CLI exit code 3).
class StageError : public std::runtime_error {
 public:
  explicit StageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace repgraph
