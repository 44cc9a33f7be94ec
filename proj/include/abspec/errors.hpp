#pragma once

#include <stdexcept>
#include <string>

namespace abspec {

// Argument outside the mathematical or numerical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Inconsistent user configuration (channel sets, theta tables, config files).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Caller violated a documented precondition that is not a domain issue,
// e.g. asking for l_q of a function without an analytic second derivative.
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace abspec
