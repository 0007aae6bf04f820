#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace rdrho {

// Parameters or counts outside the model's domain (inadmissible cells,
// empty groups, delta0 outside (-1, 1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative fit stopped without meeting its convergence rule.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A (sub)block of the Fisher information could not be inverted, so the
// Wald-type and score statistics are unavailable at that point.
class SingularInformationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The trigonometric closed form for the cubic root is numerically invalid;
// the caller should fall back to a general real-root solver.
class CubicFallbackRequired : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sample-size search reached its size cap without the target power.
class UnattainableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed table input. line/field are 1-based; 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line = 0, std::string field = {})
      : std::runtime_error(format(message, line, field)), line_(line), field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string format(const std::string& message, std::size_t line, const std::string& field) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += "field '" + field + "': ";
    return out + message;
  }

  std::size_t line_;
  std::string field_;
};

}  // namespace rdrho
