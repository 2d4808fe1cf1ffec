#include "convexlab/error.hpp"

namespace convexlab {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kDegenerateNodes: return "DegenerateNodes";
    case ErrorCode::kIllConditioned: return "IllConditioned";
    case ErrorCode::kInvalidOrder: return "InvalidOrder";
    case ErrorCode::kInvalidN: return "InvalidN";
    case ErrorCode::kNotConvexInput: return "NotConvexInput";
    case ErrorCode::kNoConvexityThreshold: return "NoConvexityThreshold";
    case ErrorCode::kPartitionTooCoarse: return "PartitionTooCoarse";
    case ErrorCode::kNBelowThreshold: return "NBelowThreshold";
    case ErrorCode::kNotConvexOutput: return "NotConvexOutput";
    case ErrorCode::kMismatchedInputs: return "MismatchedInputs";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace convexlab
