#pragma once

#include <stdexcept>
#include <string>

namespace ecml {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based, 0 when not tied to a line.
struct ParseError : Error {
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
  int line;
};

// Ill-formed problem specification (unknown identifier, non-monotone cc, ...).
struct SpecError : Error {
  using Error::Error;
};

// A configured enumeration / state budget was exceeded.
struct BudgetExceeded : Error {
  using Error::Error;
};

}  // namespace ecml
