#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rva {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line` and `column` are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    std::string where;
    if (line != 0) where += "line " + std::to_string(line);
    if (column != 0) where += (where.empty() ? "" : ", ") + std::string("column ") + std::to_string(column);
    return where.empty() ? what : where + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

/// Structurally invalid automata, mismatched bases/arities, unbound names.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A configured resource bound was exceeded; never a verdict.
class EngineLimitError : public Error {
 public:
  EngineLimitError(const std::string& stage, std::size_t size)
      : Error("engine limit exceeded in " + stage + " (largest intermediate automaton: " +
              std::to_string(size) + " states)"),
        stage_(stage),
        size_(size) {}

  const std::string& stage() const { return stage_; }
  std::size_t size() const { return size_; }

 private:
  std::string stage_;
  std::size_t size_;
};

}  // namespace rva
