#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace woldlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that violates a structural invariant (unknown index, non-orthogonal
/// columns, overlapping tail images, ...).
class MalformedInput : public Error {
 public:
  using Error::Error;
};

class MalformedComposition : public Error {
 public:
  using Error::Error;
};

/// A precondition of an analysis is not met. The message names the failing
/// check and, where one exists, the witness.
class Refused : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& what)
      : Error("line " + std::to_string(line) + ", " + field + ": " + what),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

}  // namespace woldlab
