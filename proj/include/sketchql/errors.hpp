#pragma once

#include <stdexcept>
#include <string>

namespace sketchql {

class TypeError : public std::runtime_error {
public:
  enum class Kind {
    UnknownTable,
    UnknownColumn,
    AggregateTypeMismatch,
    PredicateTypeMismatch,
    NonScalarSubquery,
    ConflictingColumn,
  };

  TypeError(Kind kind, std::string subterm, const std::string& detail)
      : std::runtime_error(detail + " [" + subterm + "]"),
        kind_(kind),
        subterm_(std::move(subterm)) {}

  Kind kind() const { return kind_; }
  const std::string& subterm() const { return subterm_; }

private:
  Kind kind_;
  std::string subterm_;
};

class LoadError : public std::runtime_error {
public:
  enum class Kind {
    MissingTable,
    TypeMismatch,
    DanglingFk,
    NullCell,
    BadFormat,
  };

  LoadError(Kind kind, const std::string& detail)
      : std::runtime_error(detail), kind_(kind) {}

  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

class ParseError : public std::runtime_error {
public:
  ParseError(int line, int column, std::string expected, const std::string& detail)
      : std::runtime_error(detail),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  int line() const { return line_; }
  int column() const { return column_; }
  // Comma-separated set of tokens the parser would have accepted.
  const std::string& expected() const { return expected_; }

private:
  int line_;
  int column_;
  std::string expected_;
};

class EvalError : public std::runtime_error {
public:
  explicit EvalError(const std::string& detail) : std::runtime_error(detail) {}
};

class TrainError : public std::runtime_error {
public:
  explicit TrainError(const std::string& detail) : std::runtime_error(detail) {}
};

}  // namespace sketchql
