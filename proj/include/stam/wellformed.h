#pragma once

#include <string>
#include <vector>

#include "stam/notation.h"

namespace stam {

enum class ViolationKind {
  UnboundResultIndex,    // non-reducing assign with an unbound lhs variable
  ForallOverwritesResult,// forall over a var missing from a plain assign lhs
  ShadowedTensor,        // where producer writes a tensor visible outside
  SequenceTensorMismatch,// sequence stages modify different tensors
  WhereTensorsEqual,     // where sides modify the same tensor
  ResultOnRhs,           // assignment reads the tensor it modifies
  ReductionInConcrete,   // reduction expression inside concrete notation
};

struct Violation {
  ViolationKind kind;
  StmtPath path;       // offending sub-statement
  std::string detail;
};

std::string describe(const Violation& violation);

/// Checks the concrete index notation invariants; an empty result means the
/// statement is well formed.  Violations are data, not errors.
std::vector<Violation> checkWellFormed(const Stmt& stmt);

}  // namespace stam
