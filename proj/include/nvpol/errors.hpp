// errors.hpp - exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace nvpol {

/// Violated numeric precondition (bad physical parameter or argument).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Malformed or degenerate input data (files, datasets, fits).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failure; the message carries the offending path.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad command invocation (reserved for the CLI front end).
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nvpol
