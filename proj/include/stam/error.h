#pragma once

#include <stdexcept>
#include <string>

namespace stam {

/// Machine-checkable reason attached to every stam exception.
enum class ErrorCode {
  Parse,
  ArityMismatch,
  DimensionMismatch,
  OrderMismatch,
  OutOfRange,
  AppendOutOfOrder,
  IllFormed,
  PreconditionViolated,
  SequencePresent,
  DistributivityViolated,
  VariableNotInScope,
  ReusePrecondition1,
  ReusePrecondition2,
  NeedsReorder,
  UnsupportedMerge,
  UnplannableResult,
  MissingBinding,
  MissingSlot,
  CheckFailed,
  Io,
  Internal,
};

const char* errorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(errorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace stam

// Internal invariant check; failures indicate a stam bug, not user error.
#define STAM_IASSERT(cond, msg)                                   \
  do {                                                            \
    if (!(cond)) ::stam::fail(::stam::ErrorCode::Internal, msg); \
  } while (0)
