#include "regext/error.hpp"

namespace regext {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorKind::CostNotConvex: return "CostNotConvex";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DegenerateDiscriminant: return "DegenerateDiscriminant";
    case ErrorKind::CrossCheckFailed: return "CrossCheckFailed";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::AssumptionViolated: return "AssumptionViolated";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::OrderingViolated: return "OrderingViolated";
    case ErrorKind::SRPViolated: return "SRPViolated";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace regext
