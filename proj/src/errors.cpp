#include "swipt/errors.hpp"

namespace swipt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TargetUnattainable: return "TargetUnattainable";
    case ErrorCode::DegenerateReceiver: return "DegenerateReceiver";
    case ErrorCode::SingularY: return "SingularY";
    case ErrorCode::InfeasibleDual: return "InfeasibleDual";
    case ErrorCode::BisectionFailure: return "BisectionFailure";
    case ErrorCode::NoPositiveScale: return "NoPositiveScale";
    case ErrorCode::AllStartsDegenerate: return "AllStartsDegenerate";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace swipt
