#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace regext {

enum class ErrorKind {
  NonPositiveParameter,
  CostNotConvex,
  OutOfRange,
  DegenerateDiscriminant,
  CrossCheckFailed,
  PreconditionViolated,
  DomainError,
  AssumptionViolated,
  NoBracket,
  VerificationFailed,
  QuadratureNotConverged,
  OrderingViolated,
  SRPViolated,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

// Base for every error raised by the library. The kind is stable and is what
// callers (and the CLI exit-code mapping) dispatch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace regext
