#include "arbor/error.hpp"

namespace arbor {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::UnreachableVertex: return "UnreachableVertex";
    case ErrorCode::CoverageFailure: return "CoverageFailure";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::TrappedCluster: return "TrappedCluster";
    case ErrorCode::ZeroConditioning: return "ZeroConditioning";
    case ErrorCode::NoCycle: return "NoCycle";
    case ErrorCode::UnknownTree: return "UnknownTree";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace arbor
