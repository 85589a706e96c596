#include "cbrn/error.hpp"

namespace cbrn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegeneratePattern: return "DegeneratePattern";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kBadFormat: return "BadFormat";
    case ErrorCode::kDuplicateEntry: return "DuplicateEntry";
    case ErrorCode::kIndexGap: return "IndexGap";
    case ErrorCode::kEmptyLabel: return "EmptyLabel";
    case ErrorCode::kLabelTooLong: return "LabelTooLong";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kIntraBallLink: return "IntraBallLink";
    case ErrorCode::kUnknownBall: return "UnknownBall";
    case ErrorCode::kUnknownBallPair: return "UnknownBallPair";
    case ErrorCode::kNoRecognition: return "NoRecognition";
    case ErrorCode::kNoAssociation: return "NoAssociation";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kTruncated: return "Truncated";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace cbrn
