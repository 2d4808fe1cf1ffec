#pragma once

#include <stdexcept>
#include <string>

namespace convexlab {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kDegenerateNodes,
  kIllConditioned,
  kInvalidOrder,
  kInvalidN,
  kNotConvexInput,
  kNoConvexityThreshold,
  kPartitionTooCoarse,
  kNBelowThreshold,
  kNotConvexOutput,
  kMismatchedInputs,
  kIo,
};

const char* error_code_name(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above. Some
// errors carry a numeric payload: the admissible H for kPartitionTooCoarse and
// the required n for kNBelowThreshold.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double payload = 0.0)
      : std::runtime_error(what), code_(code), payload_(payload) {}

  ErrorCode code() const noexcept { return code_; }
  double payload() const noexcept { return payload_; }

 private:
  ErrorCode code_;
  double payload_;
};

}  // namespace convexlab
