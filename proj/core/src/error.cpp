#include "tlif/error.hpp"

namespace tlif {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NoisyLimit: return "NoisyLimit";
    case ErrorCode::MomentDiverges: return "MomentDiverges";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::KinkPoint: return "KinkPoint";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NegativeIncome: return "NegativeIncome";
  }
  return "Unknown";
}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace tlif
