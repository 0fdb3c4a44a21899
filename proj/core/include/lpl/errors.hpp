#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpl {

// Invalid inputs surface as std::invalid_argument. The types below cover
// the failure modes callers are expected to branch on.

/// A closed form is evaluated at a singular point (zero denominator, K = 1).
class SingularParameterError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameters violate a theorem's feasibility region (negative radicand, ...).
class InfeasibleParameterError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed text input. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Training produced a non-finite loss or parameter.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lpl
