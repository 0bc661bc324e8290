#pragma once

#include "stam/notation.h"

namespace stam {

/// Algebraic facts about the binary operators.  Transformation preconditions
/// (associativity for forall swaps, distributivity for the workspace
/// rewrite) read this table, so adding an operator does not touch the
/// transform logic.
struct OpProperties {
  double identity;
  bool associative;
  bool distributesOverAdd;
  bool distributesOverMul;

  bool distributesOver(BinaryOp other) const {
    return other == BinaryOp::Add ? distributesOverAdd : distributesOverMul;
  }
};

const OpProperties& properties(BinaryOp op);

double applyOp(BinaryOp op, double lhs, double rhs);

}  // namespace stam
