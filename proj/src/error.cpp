#include "stam/error.h"

namespace stam {

const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::ArityMismatch: return "arity mismatch";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::OrderMismatch: return "order mismatch";
    case ErrorCode::OutOfRange: return "coordinate out of range";
    case ErrorCode::AppendOutOfOrder: return "append out of order";
    case ErrorCode::IllFormed: return "ill-formed statement";
    case ErrorCode::PreconditionViolated: return "precondition violated";
    case ErrorCode::SequencePresent: return "sequence present";
    case ErrorCode::DistributivityViolated: return "distributivity violated";
    case ErrorCode::VariableNotInScope: return "variable not in scope";
    case ErrorCode::ReusePrecondition1: return "reuse precondition 1";
    case ErrorCode::ReusePrecondition2: return "reuse precondition 2";
    case ErrorCode::NeedsReorder: return "needs reorder";
    case ErrorCode::UnsupportedMerge: return "unsupported merge";
    case ErrorCode::UnplannableResult: return "unplannable result";
    case ErrorCode::MissingBinding: return "missing binding";
    case ErrorCode::MissingSlot: return "missing slot";
    case ErrorCode::CheckFailed: return "check failed";
    case ErrorCode::Io: return "io error";
    case ErrorCode::Internal: return "internal error";
  }
  return "unknown error";
}

}  // namespace stam
