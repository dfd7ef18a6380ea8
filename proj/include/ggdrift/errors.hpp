#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ggdrift {

/// Non-finite or out-of-support numerical input.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Shape mismatch or precondition violation on an argument.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// No cohort survived the age-coverage rule.
class SelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The sampler could not find a starting point with finite log-posterior.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SummaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration; `field()` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace ggdrift
