#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace synsym {

// Stable numeric values; mirrored by synsym_status in synsym.h.
enum class Errc : int {
  kInvalidArgument = 1,
  kIo = 2,
  kSchemaViolation = 3,
  kProviderExhausted = 4,
  kAuthMissing = 5,
  kMalformedReply = 6,
  kUnparseableReply = 7,
  kFanoutTooSmall = 8,
  kCombinationStall = 9,
  kUnscored = 10,
  kUnknownSourceLabel = 11,
  kEmptyCorpus = 12,
  kTooFewSamples = 13,
  kTranslationFailed = 14,
  kEmptyTrainSet = 15,
  kLengthMismatch = 16,
  kNoEvaluableClasses = 17,
  kSchemeMismatch = 18,
  kTransient = 19,  // retryable transport or rate-limit failure
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace synsym
