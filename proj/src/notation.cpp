#include "stam/notation.h"

#include <algorithm>
#include <functional>

namespace stam {

IndexVar makeIndexVar(const std::string& name) {
  return std::make_shared<IndexVarContent>(IndexVarContent{name});
}

TensorVar makeTensorVar(const std::string& name, int order, bool temporary) {
  return std::make_shared<TensorVarContent>(
      TensorVarContent{name, order, temporary});
}

const char* opSymbol(BinaryOp op) {
  return op == BinaryOp::Add ? "+" : "*";
}

Expr literal(double value) {
  auto node = std::make_shared<ExprContent>();
  node->kind = ExprKind::Literal;
  node->value = value;
  return node;
}

Expr access(TensorVar tensor, std::vector<IndexVar> indices) {
  if ((int)indices.size() != tensor->order) {
    fail(ErrorCode::ArityMismatch,
         "tensor " + tensor->name + " has order " +
             std::to_string(tensor->order) + " but is accessed with " +
             std::to_string(indices.size()) + " indices");
  }
  auto node = std::make_shared<ExprContent>();
  node->kind = ExprKind::Access;
  node->tensor = std::move(tensor);
  node->indices = std::move(indices);
  return node;
}

Expr binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto node = std::make_shared<ExprContent>();
  node->kind = ExprKind::Binary;
  node->op = op;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

Expr add(Expr lhs, Expr rhs) {
  return binary(BinaryOp::Add, std::move(lhs), std::move(rhs));
}

Expr mul(Expr lhs, Expr rhs) {
  return binary(BinaryOp::Mul, std::move(lhs), std::move(rhs));
}

Expr reduction(std::vector<IndexVar> vars, Expr body) {
  auto node = std::make_shared<ExprContent>();
  node->kind = ExprKind::Reduction;
  node->reductionVars = std::move(vars);
  node->body = std::move(body);
  return node;
}

Stmt assign(Expr lhs, std::optional<BinaryOp> op, Expr rhs) {
  STAM_IASSERT(lhs && lhs->kind == ExprKind::Access,
               "assignment target must be an access expression");
  auto node = std::make_shared<StmtContent>();
  node->kind = StmtKind::Assign;
  node->lhs = std::move(lhs);
  node->op = op;
  node->rhs = std::move(rhs);
  return node;
}

Stmt forall(IndexVar var, Stmt body) {
  auto node = std::make_shared<StmtContent>();
  node->kind = StmtKind::Forall;
  node->var = std::move(var);
  node->body = std::move(body);
  return node;
}

Stmt forall(const std::vector<IndexVar>& vars, Stmt body) {
  Stmt stmt = std::move(body);
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    stmt = forall(*it, std::move(stmt));
  }
  return stmt;
}

Stmt where(Stmt consumer, Stmt producer) {
  auto node = std::make_shared<StmtContent>();
  node->kind = StmtKind::Where;
  node->consumer = std::move(consumer);
  node->producer = std::move(producer);
  return node;
}

Stmt sequence(std::vector<Stmt> stmts) {
  STAM_IASSERT(!stmts.empty(), "empty sequence");
  std::vector<Stmt> flat;
  for (Stmt& s : stmts) {
    if (s->kind == StmtKind::Sequence) {
      flat.insert(flat.end(), s->stmts.begin(), s->stmts.end());
    } else {
      flat.push_back(std::move(s));
    }
  }
  if (flat.size() == 1) return flat[0];
  auto node = std::make_shared<StmtContent>();
  node->kind = StmtKind::Sequence;
  node->stmts = std::move(flat);
  return node;
}

TensorVar modifiedTensor(const Stmt& stmt) {
  switch (stmt->kind) {
    case StmtKind::Assign: return stmt->lhs->tensor;
    case StmtKind::Forall: return modifiedTensor(stmt->body);
    case StmtKind::Where: return modifiedTensor(stmt->consumer);
    case StmtKind::Sequence: return modifiedTensor(stmt->stmts.front());
  }
  fail(ErrorCode::Internal, "unknown statement kind");
}

namespace {

void collectFree(const Expr& expr, std::vector<IndexVar>& bound,
                 std::vector<IndexVar>& out) {
  switch (expr->kind) {
    case ExprKind::Literal:
      return;
    case ExprKind::Access:
      for (const IndexVar& var : expr->indices) {
        if (std::find(bound.begin(), bound.end(), var) != bound.end()) {
          continue;
        }
        if (std::find(out.begin(), out.end(), var) == out.end()) {
          out.push_back(var);
        }
      }
      return;
    case ExprKind::Binary:
      collectFree(expr->lhs, bound, out);
      collectFree(expr->rhs, bound, out);
      return;
    case ExprKind::Reduction: {
      size_t n = bound.size();
      bound.insert(bound.end(), expr->reductionVars.begin(),
                   expr->reductionVars.end());
      collectFree(expr->body, bound, out);
      bound.resize(n);
      return;
    }
  }
}

void collectFree(const Stmt& stmt, std::vector<IndexVar>& bound,
                 std::vector<IndexVar>& out) {
  switch (stmt->kind) {
    case StmtKind::Assign:
      collectFree(stmt->lhs, bound, out);
      collectFree(stmt->rhs, bound, out);
      return;
    case StmtKind::Forall: {
      bound.push_back(stmt->var);
      collectFree(stmt->body, bound, out);
      bound.pop_back();
      return;
    }
    case StmtKind::Where:
      collectFree(stmt->consumer, bound, out);
      collectFree(stmt->producer, bound, out);
      return;
    case StmtKind::Sequence:
      for (const Stmt& s : stmt->stmts) collectFree(s, bound, out);
      return;
  }
}

}  // namespace

std::vector<IndexVar> freeIndexVars(const Expr& expr) {
  std::vector<IndexVar> bound, out;
  collectFree(expr, bound, out);
  return out;
}

std::vector<IndexVar> freeIndexVars(const Stmt& stmt) {
  std::vector<IndexVar> bound, out;
  collectFree(stmt, bound, out);
  return out;
}

bool usesIndexVar(const Stmt& stmt, const IndexVar& var) {
  auto free = freeIndexVars(stmt);
  return std::find(free.begin(), free.end(), var) != free.end();
}

bool usesTensor(const Expr& expr, const TensorVar& tensor) {
  switch (expr->kind) {
    case ExprKind::Literal: return false;
    case ExprKind::Access: return expr->tensor == tensor;
    case ExprKind::Binary:
      return usesTensor(expr->lhs, tensor) || usesTensor(expr->rhs, tensor);
    case ExprKind::Reduction: return usesTensor(expr->body, tensor);
  }
  return false;
}

bool usesTensor(const Stmt& stmt, const TensorVar& tensor) {
  switch (stmt->kind) {
    case StmtKind::Assign:
      return usesTensor(stmt->lhs, tensor) || usesTensor(stmt->rhs, tensor);
    case StmtKind::Forall: return usesTensor(stmt->body, tensor);
    case StmtKind::Where:
      return usesTensor(stmt->consumer, tensor) ||
             usesTensor(stmt->producer, tensor);
    case StmtKind::Sequence:
      for (const Stmt& s : stmt->stmts) {
        if (usesTensor(s, tensor)) return true;
      }
      return false;
  }
  return false;
}

bool containsSequence(const Stmt& stmt) {
  switch (stmt->kind) {
    case StmtKind::Assign: return false;
    case StmtKind::Forall: return containsSequence(stmt->body);
    case StmtKind::Where:
      return containsSequence(stmt->consumer) ||
             containsSequence(stmt->producer);
    case StmtKind::Sequence: return true;
  }
  return false;
}

bool containsReduction(const Expr& expr) {
  switch (expr->kind) {
    case ExprKind::Literal:
    case ExprKind::Access:
      return false;
    case ExprKind::Binary:
      return containsReduction(expr->lhs) || containsReduction(expr->rhs);
    case ExprKind::Reduction:
      return true;
  }
  return false;
}

namespace {

void collectTensors(const Expr& expr, std::vector<TensorVar>& out) {
  switch (expr->kind) {
    case ExprKind::Literal: return;
    case ExprKind::Access:
      if (std::find(out.begin(), out.end(), expr->tensor) == out.end()) {
        out.push_back(expr->tensor);
      }
      return;
    case ExprKind::Binary:
      collectTensors(expr->lhs, out);
      collectTensors(expr->rhs, out);
      return;
    case ExprKind::Reduction:
      collectTensors(expr->body, out);
      return;
  }
}

void collectTensors(const Stmt& stmt, std::vector<TensorVar>& out) {
  switch (stmt->kind) {
    case StmtKind::Assign:
      collectTensors(stmt->lhs, out);
      collectTensors(stmt->rhs, out);
      return;
    case StmtKind::Forall: collectTensors(stmt->body, out); return;
    case StmtKind::Where:
      collectTensors(stmt->consumer, out);
      collectTensors(stmt->producer, out);
      return;
    case StmtKind::Sequence:
      for (const Stmt& s : stmt->stmts) collectTensors(s, out);
      return;
  }
}

}  // namespace

std::vector<TensorVar> tensorVars(const Stmt& stmt) {
  std::vector<TensorVar> out;
  collectTensors(stmt, out);
  return out;
}

std::vector<TensorVar> tensorVars(const SourceExpr& src) {
  std::vector<TensorVar> out;
  collectTensors(src.lhs, out);
  collectTensors(src.rhs, out);
  return out;
}

namespace {

template <typename VarEq, typename TensorEq>
bool exprEquals(const Expr& a, const Expr& b, VarEq varEq, TensorEq tensorEq) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Literal:
      return a->value == b->value;
    case ExprKind::Access: {
      if (!tensorEq(a->tensor, b->tensor)) return false;
      if (a->indices.size() != b->indices.size()) return false;
      for (size_t i = 0; i < a->indices.size(); i++) {
        if (!varEq(a->indices[i], b->indices[i])) return false;
      }
      return true;
    }
    case ExprKind::Binary:
      return a->op == b->op &&
             exprEquals(a->lhs, b->lhs, varEq, tensorEq) &&
             exprEquals(a->rhs, b->rhs, varEq, tensorEq);
    case ExprKind::Reduction: {
      if (a->reductionVars.size() != b->reductionVars.size()) return false;
      for (size_t i = 0; i < a->reductionVars.size(); i++) {
        if (!varEq(a->reductionVars[i], b->reductionVars[i])) return false;
      }
      return exprEquals(a->body, b->body, varEq, tensorEq);
    }
  }
  return false;
}

}  // namespace

bool equals(const Expr& a, const Expr& b) {
  return exprEquals(
      a, b, [](const IndexVar& x, const IndexVar& y) { return x == y; },
      [](const TensorVar& x, const TensorVar& y) { return x == y; });
}

bool equals(const Stmt& a, const Stmt& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case StmtKind::Assign:
      return a->op == b->op && equals(a->lhs, b->lhs) && equals(a->rhs, b->rhs);
    case StmtKind::Forall:
      return a->var == b->var && equals(a->body, b->body);
    case StmtKind::Where:
      return equals(a->consumer, b->consumer) && equals(a->producer, b->producer);
    case StmtKind::Sequence: {
      if (a->stmts.size() != b->stmts.size()) return false;
      for (size_t i = 0; i < a->stmts.size(); i++) {
        if (!equals(a->stmts[i], b->stmts[i])) return false;
      }
      return true;
    }
  }
  return false;
}

bool equalsByName(const Expr& a, const Expr& b) {
  return exprEquals(
      a, b,
      [](const IndexVar& x, const IndexVar& y) { return x->name == y->name; },
      [](const TensorVar& x, const TensorVar& y) { return x->name == y->name; });
}

const StmtContent* stmtAt(const Stmt& root, const StmtPath& path) {
  const StmtContent* node = root.get();
  for (int step : path) {
    switch (node->kind) {
      case StmtKind::Forall:
        STAM_IASSERT(step == 0, "invalid path step in forall");
        node = node->body.get();
        break;
      case StmtKind::Where:
        STAM_IASSERT(step == 0 || step == 1, "invalid path step in where");
        node = (step == 0 ? node->consumer : node->producer).get();
        break;
      case StmtKind::Sequence:
        STAM_IASSERT(step >= 0 && step < (int)node->stmts.size(),
                     "invalid path step in sequence");
        node = node->stmts[step].get();
        break;
      case StmtKind::Assign:
        fail(ErrorCode::Internal, "path descends into an assignment");
    }
  }
  return node;
}

const ExprContent* exprAt(const Expr& root, const ExprPath& path) {
  const ExprContent* node = root.get();
  for (int step : path) {
    switch (node->kind) {
      case ExprKind::Binary:
        STAM_IASSERT(step == 0 || step == 1, "invalid path step in binary");
        node = (step == 0 ? node->lhs : node->rhs).get();
        break;
      case ExprKind::Reduction:
        STAM_IASSERT(step == 0, "invalid path step in reduction");
        node = node->body.get();
        break;
      default:
        fail(ErrorCode::Internal, "path descends into a leaf expression");
    }
  }
  return node;
}

Stmt replaceStmtAt(const Stmt& root, const StmtPath& path, Stmt replacement) {
  if (path.empty()) return replacement;
  int step = path.front();
  StmtPath rest(path.begin() + 1, path.end());
  auto node = std::make_shared<StmtContent>(*root);
  switch (root->kind) {
    case StmtKind::Forall:
      node->body = replaceStmtAt(root->body, rest, std::move(replacement));
      break;
    case StmtKind::Where:
      if (step == 0) {
        node->consumer =
            replaceStmtAt(root->consumer, rest, std::move(replacement));
      } else {
        node->producer =
            replaceStmtAt(root->producer, rest, std::move(replacement));
      }
      break;
    case StmtKind::Sequence:
      node->stmts[step] =
          replaceStmtAt(root->stmts[step], rest, std::move(replacement));
      break;
    case StmtKind::Assign:
      fail(ErrorCode::Internal, "path descends into an assignment");
  }
  return node;
}

Expr replaceExprAt(const Expr& root, const ExprPath& path, Expr replacement) {
  if (path.empty()) return replacement;
  int step = path.front();
  ExprPath rest(path.begin() + 1, path.end());
  auto node = std::make_shared<ExprContent>(*root);
  switch (root->kind) {
    case ExprKind::Binary:
      if (step == 0) {
        node->lhs = replaceExprAt(root->lhs, rest, std::move(replacement));
      } else {
        node->rhs = replaceExprAt(root->rhs, rest, std::move(replacement));
      }
      break;
    case ExprKind::Reduction:
      node->body = replaceExprAt(root->body, rest, std::move(replacement));
      break;
    default:
      fail(ErrorCode::Internal, "path descends into a leaf expression");
  }
  return node;
}

namespace {

void findInExpr(const Expr& expr, const Expr& pattern, const StmtPath& stmtPath,
                ExprPath& exprPath, std::vector<ExprLoc>& out) {
  if (equalsByName(expr, pattern)) {
    out.push_back({stmtPath, exprPath});
  }
  switch (expr->kind) {
    case ExprKind::Binary:
      exprPath.push_back(0);
      findInExpr(expr->lhs, pattern, stmtPath, exprPath, out);
      exprPath.back() = 1;
      findInExpr(expr->rhs, pattern, stmtPath, exprPath, out);
      exprPath.pop_back();
      break;
    case ExprKind::Reduction:
      exprPath.push_back(0);
      findInExpr(expr->body, pattern, stmtPath, exprPath, out);
      exprPath.pop_back();
      break;
    default:
      break;
  }
}

void findInStmt(const Stmt& stmt, const Expr& pattern, StmtPath& path,
                std::vector<ExprLoc>& out) {
  switch (stmt->kind) {
    case StmtKind::Assign: {
      ExprPath exprPath;
      findInExpr(stmt->rhs, pattern, path, exprPath, out);
      return;
    }
    case StmtKind::Forall:
      path.push_back(0);
      findInStmt(stmt->body, pattern, path, out);
      path.pop_back();
      return;
    case StmtKind::Where:
      path.push_back(0);
      findInStmt(stmt->consumer, pattern, path, out);
      path.back() = 1;
      findInStmt(stmt->producer, pattern, path, out);
      path.pop_back();
      return;
    case StmtKind::Sequence:
      for (size_t i = 0; i < stmt->stmts.size(); i++) {
        path.push_back((int)i);
        findInStmt(stmt->stmts[i], pattern, path, out);
        path.pop_back();
      }
      return;
  }
}

}  // namespace

std::vector<ExprLoc> findExpr(const Stmt& root, const Expr& pattern) {
  std::vector<ExprLoc> out;
  StmtPath path;
  findInStmt(root, pattern, path, out);
  return out;
}

std::string freshName(const Stmt& stmt, const std::string& prefix) {
  int next = 0;
  for (const TensorVar& tensor : tensorVars(stmt)) {
    const std::string& name = tensor->name;
    if (name.size() > prefix.size() && name.compare(0, prefix.size(), prefix) == 0) {
      bool digits = std::all_of(name.begin() + prefix.size(), name.end(),
                                [](char c) { return std::isdigit(c); });
      if (digits) {
        next = std::max(next, std::stoi(name.substr(prefix.size())) + 1);
      }
    }
  }
  return prefix + std::to_string(next);
}

}  // namespace stam
