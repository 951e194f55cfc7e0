#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace creo {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kChannelMismatch,
  kUnknownParent,
  kDuplicateEventId,
  kUnknownEvent,
  kUnknownBranch,
  kDuplicateBranchName,
  kStageLocked,
  kEmptyStroke,
  kSingularTransform,
  kUnknownPreset,
  kEmptyPrompt,
  kZeroCount,
  kUnknownInstruction,
  kLockedRegionRequested,
  kBackendUnavailable,
  kMissingPrompt,
  kMissingImage,
  kUnknownSession,
  kUnknownTool,
  kToolStageMismatch,
  kUnknownLock,
  kMalformedRecord,
  kMissingField,
  kNonMonotonicIndex,
  kEmptySession,
  kMixedSessions,
  kEmptyInput,
  kMixedConditions,
  kDegenerateImage,
  kInsufficientData,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// Every failure in the library surfaces as a creo::Error carrying a code that
// callers (and the HTTP layer) can switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace creo
