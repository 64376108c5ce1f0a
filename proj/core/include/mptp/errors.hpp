#pragma once

#include <stdexcept>
#include <string>

namespace mptp {

// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A user-supplied model or configuration value is invalid. `field()` names
// the offending parameter.
class InvalidParameter : public std::invalid_argument {
 public:
  InvalidParameter(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Iterative kernel exceeded its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The MAP on/off threshold collapses to zero ("always claim presence").
class DegenerateThreshold : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive enumeration would exceed its configured size cap.
class ResourceLimit : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Two independent constructions of the same object disagree.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mptp
