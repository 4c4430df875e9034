#pragma once

#include <stdexcept>
#include <string>

namespace ckme {

/// Argument lies outside the domain a kernel or geometry is declared on.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Malformed input point, config document or other user-supplied value.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A schedule or smoother fails one of the consistency conditions.
/// `condition()` names the failing check so callers can report it.
class ScheduleRejected : public std::runtime_error {
public:
  ScheduleRejected(std::string condition, const std::string& detail)
      : std::runtime_error(condition + ": " + detail), condition_(std::move(condition)) {}

  const std::string& condition() const noexcept { return condition_; }

private:
  std::string condition_;
};

/// Oracle cannot serve the requested model/kernel combination.
class OracleIncompatible : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Internal state broke an invariant that validated inputs guarantee.
class InvariantViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// File missing, unreadable or unwritable.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace ckme
