#pragma once

#include <stdexcept>
#include <string>

namespace strausslab {

/// Precondition violation: argument outside the documented domain.
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine failed to reach its contractual accuracy.
class AccuracyError : public std::runtime_error {
public:
  explicit AccuracyError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration file / CLI input problem (maps to exit code 2).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace strausslab
