#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stam/format.h"
#include "stam/notation.h"
#include "stam/parser.h"

namespace stam {

/// Converts a source index notation statement to reduction-free concrete
/// index notation.  While reductions remain, the outermost reduction of the
/// leftmost reduction-containing assignment is replaced by a fresh scalar
/// temporary t produced through a where statement; finally the result is
/// wrapped in foralls over the result indices.  Temporaries are named
/// t0, t1, ... deterministically.
Stmt lowerToConcrete(const SourceExpr& src);

/// The reordering equivalences.  Each carries its precondition as an
/// executable check and refuses statements containing sequences.
enum class EquivalenceRule {
  SwapForalls,         // forall(i) forall(j) S  =>  forall(j) forall(i) S
  LiftForallConsumer,  // (forall(j) S1) where S2  =>  forall(j) (S1 where S2)
  LiftForallBothSides, // (forall(j) S1) where (forall(j) S2)
                       //                          =>  forall(j) (S1 where S2)
  RotateWhereNest,     // (S1 where S2) where S3  =>  S1 where (S2 where S3)
  SwapWhereProducers,  // (S1 where S2) where S3  =>  (S1 where S3) where S2
};

const char* ruleName(EquivalenceRule rule);

/// Applies one equivalence at the statement identified by `location`
/// (the outer forall for SwapForalls, the outer where otherwise).
/// Throws PreconditionViolated or SequencePresent when the rule's
/// precondition fails; the result always passes checkWellFormed.
Stmt applyEquivalence(const Stmt& stmt, EquivalenceRule rule,
                      const StmtPath& location);

/// Scheduling request for the workspace optimization: pre-compute the
/// sub-expression at `target` into a fresh workspace over `vars`.
struct WorkspaceDirective {
  ExprLoc target;
  std::vector<IndexVar> vars;
  TensorFormat format;       // workspace format; only dense ships
  bool reuseResult = false;
};

/// The workspace optimization: replaces the target expression E by an
/// access to a fresh workspace tensor, inserts a where statement producing
/// it, and pushes the enclosing foralls into the where sides (both sides
/// when the variable is requested and used on both, otherwise into the side
/// that uses it; rotation moves the where through an enclosing consumer
/// position).  Preconditions: every operator containing E on the assignment's
/// right-hand side distributes over the reduction operator, and the
/// statement contains no sequence.
Stmt applyWorkspace(const Stmt& stmt, const WorkspaceDirective& directive);

/// Result-reuse form: stages the containing assignment through its own
/// left-hand side instead of a fresh workspace, yielding a sequence
/// statement.  Precondition 1: pushing would keep the forall sets of both
/// where sides identical (no hoisting).  Precondition 2: E is nested inside
/// at most one operator.
Stmt applyWorkspaceWithReuse(const Stmt& stmt,
                             const WorkspaceDirective& directive);

/// One scheduling step in CLI text form.
struct Directive {
  enum class Kind { Reorder, Workspace, WorkspaceReuse };
  Kind kind;
  std::vector<IndexVar> reorderVars;  // Reorder
  Expr pattern;                       // Workspace*: expression to extract
  std::vector<IndexVar> vars;
  TensorFormat format = denseFormat(1);
};

/// Parses "reorder(i,k,j)", "workspace(<expr>, {j}, dense)" or
/// "workspace_reuse(<expr>, {j}, dense)" directives separated by ';' or
/// newlines.  Names resolve against the parse context of the expression.
std::vector<Directive> parseDirectives(const std::string& text,
                                       ParserContext& ctx);

struct ScheduleResult {
  Stmt stmt;
  std::vector<std::string> warnings;  // e.g. ambiguous pattern matches
};

/// Lowers the source statement and applies the directives in order.
/// Reorder directives first replace scalar-temporary where statements by
/// in-place reductions so the requested loop order is expressible, then
/// reorder the forall chain with SwapForalls steps.  Workspace directives
/// match their pattern structurally (leftmost match, with a warning when
/// ambiguous).  Fails atomically: on error the exception reports which
/// directive failed and the input is left untouched.
ScheduleResult schedule(const SourceExpr& src,
                        const std::vector<Directive>& directives);

}  // namespace stam
