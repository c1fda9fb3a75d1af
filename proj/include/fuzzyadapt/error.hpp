#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fuzzyadapt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model content: bad MF parameters, unknown ids, broken invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Rule DSL syntax or resolution failure, with 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error("line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// A required input variable was not supplied.
class MissingInput : public Error {
 public:
  explicit MissingInput(std::string variable)
      : Error("missing input variable '" + variable + "'"), variable_(std::move(variable)) {}

  const std::string& variable() const noexcept { return variable_; }

 private:
  std::string variable_;
};

/// Every term of an output variable had zero strength, so there is nothing to defuzzify.
class NoRuleFired : public Error {
 public:
  explicit NoRuleFired(std::string variable)
      : Error("no rule fired for output variable '" + variable + "'"), variable_(std::move(variable)) {}

  const std::string& variable() const noexcept { return variable_; }

 private:
  std::string variable_;
};

/// File system failure; the message carries the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fuzzyadapt
