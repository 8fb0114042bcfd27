#pragma once

#include <stdexcept>
#include <string>

namespace gq3 {

/// Malformed input text. Carries a 1-based source position when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    if (line <= 0) return what;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + what;
  }
  int line_;
  int column_;
};

/// Well-formed input that violates a mathematical precondition
/// (non-prime-power modulus, bounds, hypotheses of a construction).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands with incompatible shapes.
class DimensionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace gq3
