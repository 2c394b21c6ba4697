#pragma once

#include <stdexcept>
#include <string>

namespace rdelab {

// Invalid user input or a violated precondition: bad shapes, weights that do
// not form a probability vector, mismatched state spaces, malformed files.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Malformed document. `path` locates the first violation, JSON-pointer style
// (e.g. "/noise/2/table/5").
class ParseError : public InputError {
 public:
  ParseError(std::string path, const std::string& msg)
      : InputError(path + ": " + msg), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// An iteration was started from a measure that is not fixed by the map.
class NotFixedPointError : public InputError {
 public:
  explicit NotFixedPointError(const std::string& msg) : InputError(msg) {}
};

// A configured resource cap (tensor entries, atoms, tree nodes) would be
// exceeded. The message says which cap and what to try instead.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

// The solver gave up without a definite answer (e.g. simplex iteration cap).
class InconclusiveError : public std::runtime_error {
 public:
  explicit InconclusiveError(const std::string& msg)
      : std::runtime_error(msg) {}
};

}  // namespace rdelab
