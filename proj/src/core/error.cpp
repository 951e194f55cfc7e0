#include "creo/core/error.hpp"

namespace creo {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kChannelMismatch: return "ChannelMismatch";
    case ErrorCode::kUnknownParent: return "UnknownParent";
    case ErrorCode::kDuplicateEventId: return "DuplicateEventId";
    case ErrorCode::kUnknownEvent: return "UnknownEvent";
    case ErrorCode::kUnknownBranch: return "UnknownBranch";
    case ErrorCode::kDuplicateBranchName: return "DuplicateBranchName";
    case ErrorCode::kStageLocked: return "StageLocked";
    case ErrorCode::kEmptyStroke: return "EmptyStroke";
    case ErrorCode::kSingularTransform: return "SingularTransform";
    case ErrorCode::kUnknownPreset: return "UnknownPreset";
    case ErrorCode::kEmptyPrompt: return "EmptyPrompt";
    case ErrorCode::kZeroCount: return "ZeroCount";
    case ErrorCode::kUnknownInstruction: return "UnknownInstruction";
    case ErrorCode::kLockedRegionRequested: return "LockedRegionRequested";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kMissingPrompt: return "MissingPrompt";
    case ErrorCode::kMissingImage: return "MissingImage";
    case ErrorCode::kUnknownSession: return "UnknownSession";
    case ErrorCode::kUnknownTool: return "UnknownTool";
    case ErrorCode::kToolStageMismatch: return "ToolStageMismatch";
    case ErrorCode::kUnknownLock: return "UnknownLock";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kNonMonotonicIndex: return "NonMonotonicIndex";
    case ErrorCode::kEmptySession: return "EmptySession";
    case ErrorCode::kMixedSessions: return "MixedSessions";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kMixedConditions: return "MixedConditions";
    case ErrorCode::kDegenerateImage: return "DegenerateImage";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace creo
