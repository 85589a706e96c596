#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cbrn {

enum class ErrorCode {
  kDegeneratePattern,
  kDimensionMismatch,
  kBadFormat,
  kDuplicateEntry,
  kIndexGap,
  kEmptyLabel,
  kLabelTooLong,
  kIndexOutOfRange,
  kIntraBallLink,
  kUnknownBall,
  kUnknownBallPair,
  kNoRecognition,
  kNoAssociation,
  kUnsupportedVersion,
  kTruncated,
  kInvalidConfig,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library is an Error carrying a code, so
// callers (the CLI in particular) can map failures to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cbrn
