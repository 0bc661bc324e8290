#include "stam/wellformed.h"

#include <algorithm>
#include <sstream>

#include "stam/printer.h"

namespace stam {

namespace {

const char* violationName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::UnboundResultIndex: return "UnboundResultIndex";
    case ViolationKind::ForallOverwritesResult: return "ForallOverwritesResult";
    case ViolationKind::ShadowedTensor: return "ShadowedTensor";
    case ViolationKind::SequenceTensorMismatch: return "SequenceTensorMismatch";
    case ViolationKind::WhereTensorsEqual: return "WhereTensorsEqual";
    case ViolationKind::ResultOnRhs: return "ResultOnRhs";
    case ViolationKind::ReductionInConcrete: return "ReductionInConcrete";
  }
  return "Unknown";
}

bool pathUnder(const StmtPath& path, const StmtPath& prefix) {
  if (path.size() < prefix.size()) return false;
  return std::equal(prefix.begin(), prefix.end(), path.begin());
}

struct Checker {
  std::vector<Violation> violations;
  // Every tensor use with the path of its enclosing statement.
  std::vector<std::pair<TensorVar, StmtPath>> uses;

  void collectUses(const Expr& expr, const StmtPath& path) {
    switch (expr->kind) {
      case ExprKind::Literal: return;
      case ExprKind::Access: uses.emplace_back(expr->tensor, path); return;
      case ExprKind::Binary:
        collectUses(expr->lhs, path);
        collectUses(expr->rhs, path);
        return;
      case ExprKind::Reduction: collectUses(expr->body, path); return;
    }
  }

  void collectUses(const Stmt& stmt, StmtPath& path) {
    switch (stmt->kind) {
      case StmtKind::Assign:
        collectUses(stmt->lhs, path);
        collectUses(stmt->rhs, path);
        return;
      case StmtKind::Forall:
        path.push_back(0);
        collectUses(stmt->body, path);
        path.pop_back();
        return;
      case StmtKind::Where:
        path.push_back(0);
        collectUses(stmt->consumer, path);
        path.back() = 1;
        collectUses(stmt->producer, path);
        path.pop_back();
        return;
      case StmtKind::Sequence:
        for (size_t i = 0; i < stmt->stmts.size(); i++) {
          path.push_back((int)i);
          collectUses(stmt->stmts[i], path);
          path.pop_back();
        }
        return;
    }
  }

  // `bound`: variables bound by any enclosing forall.  `pending`: enclosing
  // forall variables whose justification falls on this statement's
  // consumer-side assignments (reset when entering a where producer).
  void check(const Stmt& stmt, StmtPath& path, std::vector<IndexVar>& bound,
             std::vector<IndexVar>& pending) {
    switch (stmt->kind) {
      case StmtKind::Assign: {
        if (usesTensor(stmt->rhs, stmt->lhs->tensor)) {
          violations.push_back({ViolationKind::ResultOnRhs, path,
                                stmt->lhs->tensor->name});
        }
        if (containsReduction(stmt->rhs)) {
          violations.push_back({ViolationKind::ReductionInConcrete, path,
                                printExpr(stmt->rhs)});
        }
        if (!stmt->op) {
          for (const IndexVar& var : stmt->lhs->indices) {
            if (std::find(bound.begin(), bound.end(), var) == bound.end()) {
              violations.push_back(
                  {ViolationKind::UnboundResultIndex, path, var->name});
            }
          }
          for (const IndexVar& var : pending) {
            if (std::find(stmt->lhs->indices.begin(), stmt->lhs->indices.end(),
                          var) == stmt->lhs->indices.end()) {
              violations.push_back(
                  {ViolationKind::ForallOverwritesResult, path, var->name});
            }
          }
        }
        return;
      }
      case StmtKind::Forall: {
        bound.push_back(stmt->var);
        pending.push_back(stmt->var);
        path.push_back(0);
        check(stmt->body, path, bound, pending);
        path.pop_back();
        pending.pop_back();
        bound.pop_back();
        return;
      }
      case StmtKind::Where: {
        if (modifiedTensor(stmt->consumer) == modifiedTensor(stmt->producer)) {
          violations.push_back({ViolationKind::WhereTensorsEqual, path,
                                modifiedTensor(stmt->consumer)->name});
        }
        TensorVar temp = modifiedTensor(stmt->producer);
        for (const auto& [tensor, usePath] : uses) {
          if (tensor == temp && !pathUnder(usePath, path)) {
            violations.push_back({ViolationKind::ShadowedTensor, path,
                                  temp->name});
            break;
          }
        }
        path.push_back(0);
        check(stmt->consumer, path, bound, pending);
        path.back() = 1;
        std::vector<IndexVar> producerPending;
        check(stmt->producer, path, bound, producerPending);
        path.pop_back();
        return;
      }
      case StmtKind::Sequence: {
        TensorVar target = modifiedTensor(stmt->stmts.front());
        for (size_t i = 0; i < stmt->stmts.size(); i++) {
          if (modifiedTensor(stmt->stmts[i]) != target) {
            violations.push_back({ViolationKind::SequenceTensorMismatch, path,
                                  modifiedTensor(stmt->stmts[i])->name});
          }
          path.push_back((int)i);
          check(stmt->stmts[i], path, bound, pending);
          path.pop_back();
        }
        return;
      }
    }
  }
};

}  // namespace

std::string describe(const Violation& violation) {
  std::ostringstream out;
  out << violationName(violation.kind);
  if (!violation.detail.empty()) out << " " << violation.detail;
  out << " at path [";
  for (size_t i = 0; i < violation.path.size(); i++) {
    if (i) out << ",";
    out << violation.path[i];
  }
  out << "]";
  return out.str();
}

std::vector<Violation> checkWellFormed(const Stmt& stmt) {
  Checker checker;
  StmtPath path;
  checker.collectUses(stmt, path);
  STAM_IASSERT(path.empty(), "path not rewound");
  std::vector<IndexVar> bound, pending;
  checker.check(stmt, path, bound, pending);

  // Any variable still free at the root cannot be bound during execution.
  for (const IndexVar& var : freeIndexVars(stmt)) {
    bool reported = std::any_of(
        checker.violations.begin(), checker.violations.end(),
        [&](const Violation& v) {
          return v.kind == ViolationKind::UnboundResultIndex &&
                 v.detail == var->name;
        });
    if (!reported) {
      checker.violations.push_back(
          {ViolationKind::UnboundResultIndex, {}, var->name});
    }
  }
  return checker.violations;
}

}  // namespace stam
