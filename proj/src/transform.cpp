#include "stam/transform.h"

#include <algorithm>
#include <sstream>

#include "stam/ops.h"
#include "stam/printer.h"
#include "stam/wellformed.h"

namespace stam {

namespace {

// Terminal assignment a statement modifies its tensor with, following
// forall bodies, where consumers and the first sequence stage.
const StmtContent* terminalAssign(const StmtContent* stmt) {
  for (;;) {
    switch (stmt->kind) {
      case StmtKind::Assign: return stmt;
      case StmtKind::Forall: stmt = stmt->body.get(); break;
      case StmtKind::Where: stmt = stmt->consumer.get(); break;
      case StmtKind::Sequence: stmt = stmt->stmts.front().get(); break;
    }
  }
}

void verifyWellFormed(const Stmt& stmt, const std::string& what) {
  auto violations = checkWellFormed(stmt);
  if (!violations.empty()) {
    fail(ErrorCode::PreconditionViolated,
         what + " produced an ill-formed statement: " +
             describe(violations.front()));
  }
}

}  // namespace

// --- Lowering ---------------------------------------------------------------

namespace {

// Pre-order search for the leftmost assignment whose rhs still contains a
// reduction expression.
bool findReducingAssign(const Stmt& stmt, StmtPath& path) {
  switch (stmt->kind) {
    case StmtKind::Assign:
      return containsReduction(stmt->rhs);
    case StmtKind::Forall:
      path.push_back(0);
      if (findReducingAssign(stmt->body, path)) return true;
      path.pop_back();
      return false;
    case StmtKind::Where:
      path.push_back(0);
      if (findReducingAssign(stmt->consumer, path)) return true;
      path.back() = 1;
      if (findReducingAssign(stmt->producer, path)) return true;
      path.pop_back();
      return false;
    case StmtKind::Sequence:
      for (size_t i = 0; i < stmt->stmts.size(); i++) {
        path.push_back((int)i);
        if (findReducingAssign(stmt->stmts[i], path)) return true;
        path.pop_back();
      }
      return false;
  }
  return false;
}

// Pre-order search for the leftmost outermost reduction node.
bool findOutermostReduction(const Expr& expr, ExprPath& path) {
  switch (expr->kind) {
    case ExprKind::Reduction:
      return true;
    case ExprKind::Binary:
      path.push_back(0);
      if (findOutermostReduction(expr->lhs, path)) return true;
      path.back() = 1;
      if (findOutermostReduction(expr->rhs, path)) return true;
      path.pop_back();
      return false;
    default:
      return false;
  }
}

}  // namespace

Stmt lowerToConcrete(const SourceExpr& src) {
  Stmt stmt = assign(src.lhs, std::nullopt, src.rhs);
  int nextTemp = 0;
  for (;;) {
    StmtPath stmtPath;
    if (!findReducingAssign(stmt, stmtPath)) break;
    const StmtContent* assignNode = stmtAt(stmt, stmtPath);

    ExprPath exprPath;
    bool found = findOutermostReduction(assignNode->rhs, exprPath);
    STAM_IASSERT(found, "reducing assignment without reduction");
    const ExprContent* red = exprAt(assignNode->rhs, exprPath);

    TensorVar temp = makeTensorVar("t" + std::to_string(nextTemp++), 0, true);
    Expr tempAccess = access(temp, {});
    Stmt consumer =
        assign(assignNode->lhs, assignNode->op,
               replaceExprAt(assignNode->rhs, exprPath, tempAccess));
    Stmt producer = forall(red->reductionVars,
                           assign(tempAccess, BinaryOp::Add, red->body));
    stmt = replaceStmtAt(stmt, stmtPath, where(consumer, producer));
  }
  return forall(src.lhs->indices, stmt);
}

// --- Reordering equivalences ------------------------------------------------

const char* ruleName(EquivalenceRule rule) {
  switch (rule) {
    case EquivalenceRule::SwapForalls: return "SwapForalls";
    case EquivalenceRule::LiftForallConsumer: return "LiftForallConsumer";
    case EquivalenceRule::LiftForallBothSides: return "LiftForallBothSides";
    case EquivalenceRule::RotateWhereNest: return "RotateWhereNest";
    case EquivalenceRule::SwapWhereProducers: return "SwapWhereProducers";
  }
  return "?";
}

namespace {

[[noreturn]] void rulePreconditionFail(EquivalenceRule rule,
                                       const std::string& reason) {
  fail(ErrorCode::PreconditionViolated,
       std::string(ruleName(rule)) + ": " + reason);
}

}  // namespace

Stmt applyEquivalence(const Stmt& stmt, EquivalenceRule rule,
                      const StmtPath& location) {
  const StmtContent* nodePtr = stmtAt(stmt, location);
  Stmt target = std::make_shared<StmtContent>(*nodePtr);
  if (containsSequence(target)) {
    fail(ErrorCode::SequencePresent,
         std::string(ruleName(rule)) +
             " does not apply to statements containing sequences");
  }

  Stmt replacement;
  switch (rule) {
    case EquivalenceRule::SwapForalls: {
      if (target->kind != StmtKind::Forall ||
          target->body->kind != StmtKind::Forall) {
        rulePreconditionFail(rule, "location is not a forall pair");
      }
      const StmtContent* terminal = terminalAssign(target.get());
      if (terminal->op && !properties(*terminal->op).associative) {
        rulePreconditionFail(rule, "increment operator " +
                                       std::string(opSymbol(*terminal->op)) +
                                       " is not associative");
      }
      replacement =
          forall(target->body->var, forall(target->var, target->body->body));
      break;
    }
    case EquivalenceRule::LiftForallConsumer: {
      if (target->kind != StmtKind::Where ||
          target->consumer->kind != StmtKind::Forall) {
        rulePreconditionFail(rule, "location is not (forall _) where _");
      }
      IndexVar var = target->consumer->var;
      if (usesIndexVar(target->producer, var)) {
        rulePreconditionFail(rule,
                             "producer uses index variable " + var->name);
      }
      replacement =
          forall(var, where(target->consumer->body, target->producer));
      break;
    }
    case EquivalenceRule::LiftForallBothSides: {
      if (target->kind != StmtKind::Where ||
          target->consumer->kind != StmtKind::Forall ||
          target->producer->kind != StmtKind::Forall) {
        rulePreconditionFail(rule,
                             "location is not (forall _) where (forall _)");
      }
      if (target->consumer->var != target->producer->var) {
        rulePreconditionFail(rule, "sides range over different variables");
      }
      const StmtContent* producerTerminal =
          terminalAssign(target->producer->body.get());
      if (producerTerminal->op) {
        rulePreconditionFail(rule,
                             "producer modifies its tensor with an increment");
      }
      replacement =
          forall(target->consumer->var,
                 where(target->consumer->body, target->producer->body));
      break;
    }
    case EquivalenceRule::RotateWhereNest: {
      if (target->kind != StmtKind::Where ||
          target->consumer->kind != StmtKind::Where) {
        rulePreconditionFail(rule, "location is not (_ where _) where _");
      }
      Stmt s1 = target->consumer->consumer;
      Stmt s2 = target->consumer->producer;
      Stmt s3 = target->producer;
      if (usesTensor(s1, modifiedTensor(s3))) {
        rulePreconditionFail(rule,
                             "consumer uses tensor " + modifiedTensor(s3)->name);
      }
      replacement = where(s1, where(s2, s3));
      break;
    }
    case EquivalenceRule::SwapWhereProducers: {
      if (target->kind != StmtKind::Where ||
          target->consumer->kind != StmtKind::Where) {
        rulePreconditionFail(rule, "location is not (_ where _) where _");
      }
      Stmt s1 = target->consumer->consumer;
      Stmt s2 = target->consumer->producer;
      Stmt s3 = target->producer;
      if (usesTensor(s2, modifiedTensor(s3))) {
        rulePreconditionFail(
            rule, "first producer uses tensor " + modifiedTensor(s3)->name);
      }
      if (usesTensor(s3, modifiedTensor(s2))) {
        rulePreconditionFail(
            rule, "second producer uses tensor " + modifiedTensor(s2)->name);
      }
      replacement = where(where(s1, s3), s2);
      break;
    }
  }

  Stmt result = replaceStmtAt(stmt, location, replacement);
  verifyWellFormed(result, ruleName(rule));
  return result;
}

// --- Workspace optimization -------------------------------------------------

namespace {

enum class PushKind { Both, Left, Right, Rotate };

struct PushOutcome {
  Stmt stmt;  // statement after splicing and pushing
  StmtPath wherePath;
  std::vector<PushKind> pushes;
};

// Pushes the enclosing foralls of the where statement at `path` into its
// sides: a variable that is requested and used on both sides moves into
// both, a variable used on one side moves into that side, and anything else
// stops the walk.  A where-consumer boundary is crossed by rotating the
// where nest when the consumer does not use the outer producer's tensor.
PushOutcome pushForalls(Stmt stmt, StmtPath path,
                        const std::vector<IndexVar>& requestedVars) {
  PushOutcome out;
  for (;;) {
    if (path.empty()) break;
    StmtPath parentPath(path.begin(), path.end() - 1);
    int lastStep = path.back();
    const StmtContent* parent = stmtAt(stmt, parentPath);
    if (parent->kind == StmtKind::Forall) {
      const StmtContent* whereNode = stmtAt(stmt, path);
      IndexVar var = parent->var;
      bool usedC = usesIndexVar(whereNode->consumer, var);
      bool usedP = usesIndexVar(whereNode->producer, var);
      bool requested = std::find(requestedVars.begin(), requestedVars.end(),
                                 var) != requestedVars.end();
      Stmt replacement;
      if (usedC && usedP && requested) {
        replacement = where(forall(var, whereNode->consumer),
                            forall(var, whereNode->producer));
        out.pushes.push_back(PushKind::Both);
      } else if (usedC && !usedP) {
        replacement =
            where(forall(var, whereNode->consumer), whereNode->producer);
        out.pushes.push_back(PushKind::Left);
      } else if (usedP && !usedC) {
        replacement =
            where(whereNode->consumer, forall(var, whereNode->producer));
        out.pushes.push_back(PushKind::Right);
      } else {
        break;
      }
      stmt = replaceStmtAt(stmt, parentPath, replacement);
      path = parentPath;
    } else if (parent->kind == StmtKind::Where && lastStep == 0) {
      // (S_w where Z) with S_w = (X where Y): rotate to X where (Y where Z)
      // so outer foralls can keep sinking into the producer side.
      const StmtContent* whereNode = stmtAt(stmt, path);
      Stmt z = parent->producer;
      if (usesTensor(whereNode->consumer, modifiedTensor(z))) break;
      Stmt replacement =
          where(whereNode->consumer, where(whereNode->producer, z));
      stmt = replaceStmtAt(stmt, parentPath, replacement);
      path = parentPath;
      out.pushes.push_back(PushKind::Rotate);
    } else {
      break;
    }
  }
  out.stmt = std::move(stmt);
  out.wherePath = std::move(path);
  return out;
}

struct WorkspaceSetup {
  const StmtContent* assignNode;
  const ExprContent* targetExpr;
  std::vector<IndexVar> vars;  // directive vars resolved against the stmt
};

WorkspaceSetup resolveDirective(const Stmt& stmt,
                                const WorkspaceDirective& directive) {
  WorkspaceSetup setup;
  setup.assignNode = stmtAt(stmt, directive.target.stmtPath);
  if (setup.assignNode->kind != StmtKind::Assign) {
    fail(ErrorCode::PreconditionViolated,
         "workspace target does not identify an assignment");
  }
  setup.targetExpr = exprAt(setup.assignNode->rhs, directive.target.exprPath);

  if (directive.vars.empty()) {
    fail(ErrorCode::PreconditionViolated,
         "workspace directive needs at least one index variable");
  }
  if (!directive.format.allDense()) {
    fail(ErrorCode::UnsupportedMerge, "only dense workspaces are supported");
  }
  if (directive.format.order() != (int)directive.vars.size()) {
    fail(ErrorCode::OrderMismatch,
         "workspace format order must match the number of variables");
  }

  // The workspace is indexed by the requested variables, which must occur
  // freely in the extracted expression.
  auto freeVars =
      freeIndexVars(std::make_shared<ExprContent>(*setup.targetExpr));
  for (const IndexVar& var : directive.vars) {
    if (std::find(freeVars.begin(), freeVars.end(), var) == freeVars.end()) {
      fail(ErrorCode::VariableNotInScope,
           "variable " + var->name +
               " does not occur in the workspaced expression");
    }
    setup.vars.push_back(var);
  }

  // Every operator between the right-hand side root and the extracted
  // expression must distribute over the reduction operator.
  if (setup.assignNode->op) {
    BinaryOp reduceOp = *setup.assignNode->op;
    const ExprContent* node = setup.assignNode->rhs.get();
    for (int step : directive.target.exprPath) {
      STAM_IASSERT(node->kind == ExprKind::Binary, "invalid expression path");
      if (!properties(node->op).distributesOver(reduceOp)) {
        fail(ErrorCode::DistributivityViolated,
             std::string("operator ") + opSymbol(node->op) +
                 " containing the expression does not distribute over " +
                 opSymbol(reduceOp));
      }
      node = (step == 0 ? node->lhs : node->rhs).get();
    }
  }
  return setup;
}

// Forall variables on the path from the root to the statement at `path`.
std::vector<IndexVar> dominatingForalls(const Stmt& root,
                                        const StmtPath& path) {
  std::vector<IndexVar> vars;
  const StmtContent* node = root.get();
  for (int step : path) {
    if (node->kind == StmtKind::Forall) vars.push_back(node->var);
    switch (node->kind) {
      case StmtKind::Forall: node = node->body.get(); break;
      case StmtKind::Where:
        node = (step == 0 ? node->consumer : node->producer).get();
        break;
      case StmtKind::Sequence: node = node->stmts[step].get(); break;
      case StmtKind::Assign:
        fail(ErrorCode::Internal, "path descends into an assignment");
    }
  }
  return vars;
}

// Rebuilds the statement so nested sequences splice into their parent,
// matching the flat (S0 ; S1 ; S2) reading of chained stages.
Stmt flattenSequences(const Stmt& stmt) {
  switch (stmt->kind) {
    case StmtKind::Assign:
      return stmt;
    case StmtKind::Forall: {
      Stmt body = flattenSequences(stmt->body);
      return body == stmt->body ? stmt : forall(stmt->var, body);
    }
    case StmtKind::Where: {
      Stmt consumer = flattenSequences(stmt->consumer);
      Stmt producer = flattenSequences(stmt->producer);
      if (consumer == stmt->consumer && producer == stmt->producer) {
        return stmt;
      }
      return where(consumer, producer);
    }
    case StmtKind::Sequence: {
      std::vector<Stmt> stages;
      for (const Stmt& s : stmt->stmts) stages.push_back(flattenSequences(s));
      return sequence(std::move(stages));
    }
  }
  return stmt;
}

// Path from the where at `wherePath` to its consumer's terminal assignment.
StmtPath consumerAssignPath(const Stmt& root, StmtPath wherePath) {
  wherePath.push_back(0);
  const StmtContent* node = stmtAt(root, wherePath);
  while (node->kind == StmtKind::Forall) {
    wherePath.push_back(0);
    node = node->body.get();
  }
  STAM_IASSERT(node->kind == StmtKind::Assign,
               "workspace consumer is not an assignment chain");
  return wherePath;
}

}  // namespace

Stmt applyWorkspace(const Stmt& stmt, const WorkspaceDirective& directive) {
  if (containsSequence(stmt)) {
    fail(ErrorCode::SequencePresent,
         "the workspace optimization does not apply to statements containing "
         "sequences");
  }
  WorkspaceSetup setup = resolveDirective(stmt, directive);
  const StmtContent* assignNode = setup.assignNode;

  TensorVar workspace =
      makeTensorVar(freshName(stmt, "w"), (int)setup.vars.size(), true);
  Expr wAccess = access(workspace, setup.vars);
  bool wholeRhs = directive.target.exprPath.empty();

  Expr extracted = std::make_shared<ExprContent>(*setup.targetExpr);
  Stmt consumer = assign(
      assignNode->lhs, assignNode->op,
      replaceExprAt(assignNode->rhs, directive.target.exprPath, wAccess));
  Stmt producer = assign(wAccess, assignNode->op, extracted);

  Stmt spliced = replaceStmtAt(stmt, directive.target.stmtPath,
                               where(consumer, producer));
  PushOutcome pushed =
      pushForalls(spliced, directive.target.stmtPath, setup.vars);

  Stmt result = pushed.stmt;
  if (wholeRhs && assignNode->op) {
    // The producer now performs the whole reduction.  When the consumer
    // ended up outside every reduction loop it runs once per result element
    // and the increment becomes a plain assignment (the form drain loops
    // take); otherwise it must keep accumulating.
    StmtPath assignPath = consumerAssignPath(result, pushed.wherePath);
    const StmtContent* consumerAssign = stmtAt(result, assignPath);
    const auto& lhsVars = consumerAssign->lhs->indices;
    bool hoisted = true;
    for (const IndexVar& var : dominatingForalls(result, assignPath)) {
      if (std::find(lhsVars.begin(), lhsVars.end(), var) == lhsVars.end()) {
        hoisted = false;
        break;
      }
    }
    if (hoisted) {
      result = replaceStmtAt(
          result, assignPath,
          assign(consumerAssign->lhs, std::nullopt, consumerAssign->rhs));
    }
  }

  verifyWellFormed(result, "workspace optimization");
  return result;
}

Stmt applyWorkspaceWithReuse(const Stmt& stmt,
                             const WorkspaceDirective& directive) {
  WorkspaceSetup setup = resolveDirective(stmt, directive);
  const StmtContent* assignNode = setup.assignNode;

  if (directive.target.exprPath.size() > 1) {
    fail(ErrorCode::ReusePrecondition2,
         "the expression is nested inside more than one operator");
  }

  // Precondition 1: the plain optimization would keep the forall sets of
  // both where sides identical, i.e. pushing never moves a forall into only
  // one side (no hoisting).
  {
    TensorVar scratch =
        makeTensorVar(freshName(stmt, "w"), (int)setup.vars.size(), true);
    Expr wAccess = access(scratch, setup.vars);
    Expr extracted = std::make_shared<ExprContent>(*setup.targetExpr);
    Stmt consumer = assign(
        assignNode->lhs, assignNode->op,
        replaceExprAt(assignNode->rhs, directive.target.exprPath, wAccess));
    Stmt producer = assign(wAccess, assignNode->op, extracted);
    Stmt spliced = replaceStmtAt(stmt, directive.target.stmtPath,
                                 where(consumer, producer));
    PushOutcome sim =
        pushForalls(spliced, directive.target.stmtPath, setup.vars);
    for (PushKind push : sim.pushes) {
      if (push != PushKind::Both) {
        fail(ErrorCode::ReusePrecondition1,
             "the optimization would hoist computation out of a loop, so the "
             "result cannot be reused as the workspace");
      }
    }
  }

  if (directive.target.exprPath.empty()) {
    return stmt;  // the whole right-hand side: nothing to stage
  }

  // Stage the assignment through its own left-hand side.
  int step = directive.target.exprPath.front();
  const ExprContent* rhs = assignNode->rhs.get();
  STAM_IASSERT(rhs->kind == ExprKind::Binary, "reuse target has no operator");
  Expr extracted = std::make_shared<ExprContent>(*setup.targetExpr);
  Expr remainder = step == 0 ? rhs->rhs : rhs->lhs;
  Stmt stage1 = assign(assignNode->lhs, assignNode->op, extracted);
  Stmt stage2 = assign(assignNode->lhs, rhs->op, remainder);

  Stmt result = replaceStmtAt(stmt, directive.target.stmtPath,
                              sequence({stage1, stage2}));
  StmtPath path = directive.target.stmtPath;

  // Duplicate requested foralls into every stage, innermost first.
  while (!path.empty()) {
    StmtPath parentPath(path.begin(), path.end() - 1);
    const StmtContent* parent = stmtAt(result, parentPath);
    if (parent->kind != StmtKind::Forall) break;
    IndexVar var = parent->var;
    bool requested = std::find(setup.vars.begin(), setup.vars.end(), var) !=
                     setup.vars.end();
    const StmtContent* seqNode = stmtAt(result, path);
    bool usedInAll =
        std::all_of(seqNode->stmts.begin(), seqNode->stmts.end(),
                    [&](const Stmt& stage) { return usesIndexVar(stage, var); });
    if (!requested || !usedInAll) break;
    std::vector<Stmt> stages;
    for (const Stmt& stage : seqNode->stmts) {
      stages.push_back(forall(var, stage));
    }
    result = replaceStmtAt(result, parentPath, sequence(std::move(stages)));
    path = parentPath;
  }

  result = flattenSequences(result);
  verifyWellFormed(result, "workspace optimization with result reuse");
  return result;
}

// --- Scheduling -------------------------------------------------------------

namespace {

// Rewrites (lhs ?= t) where (forall(red...) t += E) into
// forall(red...) lhs += E when t is a scalar temporary the consumer reads
// bare.  This reopens the reduction loop so reorder requests can interleave
// reduction and result variables.
Stmt sinkScalarTemporaries(const Stmt& stmt) {
  switch (stmt->kind) {
    case StmtKind::Assign:
      return stmt;
    case StmtKind::Forall: {
      Stmt body = sinkScalarTemporaries(stmt->body);
      return body == stmt->body ? stmt : forall(stmt->var, body);
    }
    case StmtKind::Sequence: {
      std::vector<Stmt> stages;
      bool changed = false;
      for (const Stmt& s : stmt->stmts) {
        stages.push_back(sinkScalarTemporaries(s));
        changed |= stages.back() != s;
      }
      return changed ? sequence(std::move(stages)) : stmt;
    }
    case StmtKind::Where: {
      Stmt consumer = sinkScalarTemporaries(stmt->consumer);
      Stmt producer = sinkScalarTemporaries(stmt->producer);
      if (consumer->kind == StmtKind::Assign) {
        std::vector<IndexVar> redVars;
        Stmt inner = producer;
        while (inner->kind == StmtKind::Forall) {
          redVars.push_back(inner->var);
          inner = inner->body;
        }
        if (inner->kind == StmtKind::Assign && inner->op &&
            inner->lhs->tensor->temporary && inner->lhs->indices.empty() &&
            consumer->rhs->kind == ExprKind::Access &&
            consumer->rhs->tensor == inner->lhs->tensor) {
          BinaryOp reduceOp = *inner->op;
          std::optional<BinaryOp> outerOp = consumer->op;
          // A bare increment consumer only folds when the operators agree.
          if (!outerOp || *outerOp == reduceOp) {
            return forall(redVars,
                          assign(consumer->lhs, reduceOp, inner->rhs));
          }
        }
      }
      if (consumer == stmt->consumer && producer == stmt->producer) {
        return stmt;
      }
      return where(consumer, producer);
    }
  }
  return stmt;
}

Stmt applyReorder(Stmt stmt, const std::vector<IndexVar>& order) {
  stmt = sinkScalarTemporaries(stmt);

  std::vector<IndexVar> chain;
  {
    const StmtContent* node = stmt.get();
    while (node->kind == StmtKind::Forall) {
      chain.push_back(node->var);
      node = node->body.get();
    }
  }
  bool sameSet = chain.size() == order.size();
  if (sameSet) {
    for (const IndexVar& var : order) {
      if (std::find(chain.begin(), chain.end(), var) == chain.end()) {
        sameSet = false;
        break;
      }
    }
  }
  if (!sameSet) {
    std::ostringstream msg;
    msg << "reorder(";
    for (size_t i = 0; i < order.size(); i++) {
      msg << (i ? "," : "") << order[i]->name;
    }
    msg << ") does not match the loop variables of " << printStmt(stmt);
    fail(ErrorCode::PreconditionViolated, msg.str());
  }

  // Bubble the chain into the requested order with adjacent swaps, each an
  // application of the forall reordering rule.
  auto rankOf = [&](const IndexVar& var) {
    return std::find(order.begin(), order.end(), var) - order.begin();
  };
  for (;;) {
    bool swapped = false;
    for (size_t d = 0; d + 1 < chain.size(); d++) {
      if (rankOf(chain[d]) > rankOf(chain[d + 1])) {
        stmt = applyEquivalence(stmt, EquivalenceRule::SwapForalls,
                                StmtPath(d, 0));
        std::swap(chain[d], chain[d + 1]);
        swapped = true;
      }
    }
    if (!swapped) break;
  }
  return stmt;
}

std::string trimmed(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

IndexVar internVar(ParserContext& ctx, const std::string& name) {
  auto it = ctx.indexVars.find(name);
  if (it != ctx.indexVars.end()) return it->second;
  IndexVar var = makeIndexVar(name);
  ctx.indexVars.emplace(name, var);
  return var;
}

std::vector<std::string> splitTopLevel(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  int depth = 0;
  for (char c : text) {
    if (c == '(' || c == '{') depth++;
    if (c == ')' || c == '}') depth--;
    if (c == sep && depth == 0) {
      parts.push_back(part);
      part.clear();
    } else {
      part += c;
    }
  }
  parts.push_back(part);
  return parts;
}

}  // namespace

std::vector<Directive> parseDirectives(const std::string& text,
                                       ParserContext& ctx) {
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), '\n', ';');
  std::vector<Directive> out;
  for (std::string piece : splitTopLevel(normalized, ';')) {
    piece = trimmed(piece);
    if (piece.empty()) continue;
    size_t open = piece.find('(');
    size_t close = piece.rfind(')');
    if (open == std::string::npos || close == std::string::npos ||
        close < open) {
      fail(ErrorCode::Parse, "malformed schedule directive: " + piece);
    }
    std::string name = trimmed(piece.substr(0, open));
    std::string args = piece.substr(open + 1, close - open - 1);

    if (name == "reorder") {
      Directive directive;
      directive.kind = Directive::Kind::Reorder;
      for (const std::string& varText : splitTopLevel(args, ',')) {
        std::string varName = trimmed(varText);
        if (varName.empty()) fail(ErrorCode::Parse, "empty reorder variable");
        directive.reorderVars.push_back(internVar(ctx, varName));
      }
      out.push_back(std::move(directive));
      continue;
    }
    if (name == "workspace" || name == "workspace_reuse") {
      std::vector<std::string> parts = splitTopLevel(args, ',');
      if (parts.size() != 3) {
        fail(ErrorCode::Parse,
             name + " takes (expression, {vars}, format): " + piece);
      }
      Directive directive;
      directive.kind = name == "workspace" ? Directive::Kind::Workspace
                                           : Directive::Kind::WorkspaceReuse;
      directive.pattern = parseExpr(trimmed(parts[0]), ctx);
      std::string varList = trimmed(parts[1]);
      if (varList.size() < 2 || varList.front() != '{' ||
          varList.back() != '}') {
        fail(ErrorCode::Parse, "expected {vars} in " + piece);
      }
      for (const std::string& varText :
           splitTopLevel(varList.substr(1, varList.size() - 2), ',')) {
        std::string varName = trimmed(varText);
        if (varName.empty()) fail(ErrorCode::Parse, "empty workspace variable");
        directive.vars.push_back(internVar(ctx, varName));
      }
      std::string format = trimmed(parts[2]);
      if (format != "dense") {
        fail(ErrorCode::UnsupportedMerge,
             "only dense workspaces are supported, got: " + format);
      }
      directive.format = denseFormat((int)directive.vars.size());
      out.push_back(std::move(directive));
      continue;
    }
    fail(ErrorCode::Parse, "unknown schedule directive: " + name);
  }
  return out;
}

ScheduleResult schedule(const SourceExpr& src,
                        const std::vector<Directive>& directives) {
  ScheduleResult result;
  result.stmt = lowerToConcrete(src);

  for (size_t d = 0; d < directives.size(); d++) {
    const Directive& directive = directives[d];
    try {
      switch (directive.kind) {
        case Directive::Kind::Reorder: {
          result.stmt = applyReorder(result.stmt, directive.reorderVars);
          break;
        }
        case Directive::Kind::Workspace:
        case Directive::Kind::WorkspaceReuse: {
          auto matches = findExpr(result.stmt, directive.pattern);
          if (matches.empty()) {
            fail(ErrorCode::PreconditionViolated,
                 "pattern " + printExpr(directive.pattern) + " not found in " +
                     printStmt(result.stmt));
          }
          if (matches.size() > 1) {
            result.warnings.push_back(
                "pattern " + printExpr(directive.pattern) + " matches " +
                std::to_string(matches.size()) + " sites; using the leftmost");
          }
          WorkspaceDirective wd;
          wd.target = matches.front();
          wd.format = directive.format;
          wd.reuseResult = directive.kind == Directive::Kind::WorkspaceReuse;
          // Resolve the directive variables against the matched expression.
          const StmtContent* assignNode =
              stmtAt(result.stmt, wd.target.stmtPath);
          const ExprContent* exprNode =
              exprAt(assignNode->rhs, wd.target.exprPath);
          auto freeVars =
              freeIndexVars(std::make_shared<ExprContent>(*exprNode));
          for (const IndexVar& var : directive.vars) {
            auto it = std::find_if(
                freeVars.begin(), freeVars.end(),
                [&](const IndexVar& v) { return v->name == var->name; });
            if (it == freeVars.end()) {
              fail(ErrorCode::VariableNotInScope,
                   "variable " + var->name +
                       " does not occur in the workspaced expression");
            }
            wd.vars.push_back(*it);
          }
          result.stmt = wd.reuseResult
                            ? applyWorkspaceWithReuse(result.stmt, wd)
                            : applyWorkspace(result.stmt, wd);
          break;
        }
      }
    } catch (const Error& e) {
      throw Error(e.code(), "schedule directive " + std::to_string(d + 1) +
                                " failed: " + e.what());
    }
  }
  return result;
}

}  // namespace stam
