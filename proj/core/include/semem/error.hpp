#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semem {

enum class ErrorCode {
  kInvalidArgument,
  // graph
  kDuplicateType,
  kUnknownParent,
  kHierarchyCycle,
  kUnknownType,
  kUnknownSlot,
  kNotAnInstance,
  // perception
  kInvalidSignature,
  kMalformedScene,
  // nlparse
  kEmptyInput,
  kNoVerbFound,
  kNoPatientFound,
  kNoTripletFound,
  kUnknownModifier,
  kUnsupportedConjunction,
  kInvalidLexicon,
  // resolver / session
  kStaleProposal,
  kDialogueBusy,
  kUnknownPrompt,
  kPromptNotOpen,
  kShapeMismatch,
  // executor
  kDuplicateSkill,
  kUnknownSkill,
  kStalePlan,
  // persistence
  kIoFailure,
  kMalformedDocument,
  kUnsupportedVersion,
  kIntegrityViolation,
};

/// Stable identifier used on the wire (`"UnknownType"`, `"NoPatientFound"`, ...).
std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. The code is the machine-readable part;
/// the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace semem
