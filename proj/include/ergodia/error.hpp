#pragma once

#include <stdexcept>
#include <string>

namespace ergodia {

// Invalid user-supplied configuration (bad distribution, odd bin count, ...).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Argument outside the mathematical domain of a calculator.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Request would exceed the guarded problem size.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Operation produced no data to report on (e.g. zero channel uses).
class EmptyStatsError : public std::runtime_error {
 public:
  explicit EmptyStatsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ergodia
