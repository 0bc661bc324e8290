#include "stam/ops.h"

namespace stam {

const OpProperties& properties(BinaryOp op) {
  // identity, associative, distributes over add, distributes over mul
  static const OpProperties addProps = {0.0, true, false, false};
  static const OpProperties mulProps = {1.0, true, true, false};
  return op == BinaryOp::Add ? addProps : mulProps;
}

double applyOp(BinaryOp op, double lhs, double rhs) {
  return op == BinaryOp::Add ? lhs + rhs : lhs * rhs;
}

}  // namespace stam
