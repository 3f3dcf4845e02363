#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mathcamps {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParseErrorKind {
  no_question,
  duplicate_definition,
  malformed_statement,
  invalid_variable_name,
};

inline const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::no_question: return "NoQuestion";
    case ParseErrorKind::duplicate_definition: return "DuplicateDefinition";
    case ParseErrorKind::malformed_statement: return "MalformedStatement";
    case ParseErrorKind::invalid_variable_name: return "InvalidVariableName";
  }
  return "ParseError";
}

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail)
      : Error(std::string(to_string(kind)) + " (line " + std::to_string(line) +
              "): " + detail),
        kind_(kind),
        line_(line) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

enum class SolveErrorKind {
  division_by_zero,
  non_perfect_root,
  unbound_variable,
  underdetermined,
  inconsistent,
  non_linear,
  out_of_range,
  bad_question,
  exponent_too_large,
};

inline const char* to_string(SolveErrorKind kind) {
  switch (kind) {
    case SolveErrorKind::division_by_zero: return "DivisionByZero";
    case SolveErrorKind::non_perfect_root: return "NonPerfectRoot";
    case SolveErrorKind::unbound_variable: return "UnboundVariable";
    case SolveErrorKind::underdetermined: return "Underdetermined";
    case SolveErrorKind::inconsistent: return "Inconsistent";
    case SolveErrorKind::non_linear: return "NonLinear";
    case SolveErrorKind::out_of_range: return "OutOfRange";
    case SolveErrorKind::bad_question: return "BadQuestion";
    case SolveErrorKind::exponent_too_large: return "ExponentTooLarge";
  }
  return "SolveError";
}

class SolveError : public Error {
 public:
  SolveError(SolveErrorKind kind, const std::string& detail)
      : Error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  SolveErrorKind kind() const noexcept { return kind_; }

 private:
  SolveErrorKind kind_;
};

enum class ConfigErrorKind { schema, unknown_filter, unknown_transform, bad_sample };

inline const char* to_string(ConfigErrorKind kind) {
  switch (kind) {
    case ConfigErrorKind::schema: return "SchemaError";
    case ConfigErrorKind::unknown_filter: return "UnknownFilter";
    case ConfigErrorKind::unknown_transform: return "UnknownTransform";
    case ConfigErrorKind::bad_sample: return "BadSample";
  }
  return "ConfigError";
}

class ConfigError : public Error {
 public:
  /// `where` is a config path, a filter/transform name or a standard id,
  /// depending on the kind.
  ConfigError(ConfigErrorKind kind, const std::string& where, const std::string& detail)
      : Error(std::string(to_string(kind)) + " at " + where + ": " + detail),
        kind_(kind),
        where_(where) {}

  ConfigErrorKind kind() const noexcept { return kind_; }
  const std::string& where() const noexcept { return where_; }

 private:
  ConfigErrorKind kind_;
  std::string where_;
};

class ExhaustedError : public Error {
 public:
  explicit ExhaustedError(std::size_t attempts, const std::string& what = "rejection sampling")
      : Error("Exhausted after " + std::to_string(attempts) + " attempts: " + what),
        attempts_(attempts) {}

  std::size_t attempts() const noexcept { return attempts_; }

 private:
  std::size_t attempts_;
};

class NotApplicableError : public Error {
 public:
  using Error::Error;
};

class PathInvalidError : public Error {
 public:
  using Error::Error;
};

/// Transport-level failure of a chat backend after its retry budget.
class BackendError : public Error {
 public:
  BackendError(int status, std::size_t attempt, const std::string& detail)
      : Error("BackendError(status " + std::to_string(status) + ", attempt " +
              std::to_string(attempt) + "): " + detail),
        status_(status),
        attempt_(attempt) {}

  int status() const noexcept { return status_; }
  std::size_t attempt() const noexcept { return attempt_; }

 private:
  int status_;
  std::size_t attempt_;
};

}  // namespace mathcamps
