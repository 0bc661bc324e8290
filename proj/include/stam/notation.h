#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stam/error.h"

namespace stam {

// Index variables and tensor variables compare by interned identity, not by
// name, so alpha-renaming in transformations cannot capture.

struct IndexVarContent {
  std::string name;
};
using IndexVar = std::shared_ptr<const IndexVarContent>;

IndexVar makeIndexVar(const std::string& name);

struct TensorVarContent {
  std::string name;
  int order = 0;
  bool temporary = false;  // scalar temporaries and workspaces
};
using TensorVar = std::shared_ptr<const TensorVarContent>;

TensorVar makeTensorVar(const std::string& name, int order,
                        bool temporary = false);

enum class BinaryOp { Add, Mul };

const char* opSymbol(BinaryOp op);

// --- Expressions ------------------------------------------------------------

enum class ExprKind { Literal, Access, Binary, Reduction };

struct ExprContent;
using Expr = std::shared_ptr<const ExprContent>;

/// Scalar expression tree.  Reduction nodes only appear in source index
/// notation; concrete index notation is reduction-free.
struct ExprContent {
  ExprKind kind;
  // Literal
  double value = 0.0;
  // Access
  TensorVar tensor;
  std::vector<IndexVar> indices;
  // Binary
  BinaryOp op = BinaryOp::Add;
  Expr lhs, rhs;
  // Reduction
  std::vector<IndexVar> reductionVars;
  Expr body;
};

Expr literal(double value);
Expr access(TensorVar tensor, std::vector<IndexVar> indices);
Expr binary(BinaryOp op, Expr lhs, Expr rhs);
Expr add(Expr lhs, Expr rhs);
Expr mul(Expr lhs, Expr rhs);
Expr reduction(std::vector<IndexVar> vars, Expr body);

// --- Statements -------------------------------------------------------------

enum class StmtKind { Assign, Forall, Where, Sequence };

struct StmtContent;
using Stmt = std::shared_ptr<const StmtContent>;

/// Concrete index notation statement: assignment/increment, forall, where
/// (consumer where producer) or sequence of stages on one tensor.
struct StmtContent {
  StmtKind kind;
  // Assign: lhs is an Access expression; op empty means plain assignment.
  Expr lhs;
  std::optional<BinaryOp> op;
  Expr rhs;
  // Forall
  IndexVar var;
  Stmt body;
  // Where
  Stmt consumer, producer;
  // Sequence
  std::vector<Stmt> stmts;
};

Stmt assign(Expr lhs, std::optional<BinaryOp> op, Expr rhs);
Stmt forall(IndexVar var, Stmt body);
Stmt forall(const std::vector<IndexVar>& vars, Stmt body);
Stmt where(Stmt consumer, Stmt producer);
/// Nested sequences are flattened into one stage list.
Stmt sequence(std::vector<Stmt> stmts);

/// A source index notation statement: an assignment whose right-hand side
/// may contain reduction expressions.
struct SourceExpr {
  Expr lhs;  // Access
  Expr rhs;
};

// --- Queries ----------------------------------------------------------------

/// Tensor modified by the statement; for a where this is the consumer's.
TensorVar modifiedTensor(const Stmt& stmt);

/// Free index variables in order of first occurrence.  Forall and reduction
/// binders remove their variable from the body's free set.
std::vector<IndexVar> freeIndexVars(const Expr& expr);
std::vector<IndexVar> freeIndexVars(const Stmt& stmt);

bool usesIndexVar(const Stmt& stmt, const IndexVar& var);
bool usesTensor(const Stmt& stmt, const TensorVar& tensor);
bool usesTensor(const Expr& expr, const TensorVar& tensor);
bool containsSequence(const Stmt& stmt);
bool containsReduction(const Expr& expr);

/// All tensor variables in the statement, in order of first occurrence.
std::vector<TensorVar> tensorVars(const Stmt& stmt);
std::vector<TensorVar> tensorVars(const SourceExpr& src);

/// Structural equality.  Variables match by identity.
bool equals(const Expr& a, const Expr& b);
bool equals(const Stmt& a, const Stmt& b);

/// Structural equality where index and tensor variables match by name;
/// used to match textual schedule patterns against a statement.
bool equalsByName(const Expr& a, const Expr& b);

// --- Paths ------------------------------------------------------------------

// A statement path is a child-index trail from the root statement:
// Forall -> {0: body}; Where -> {0: consumer, 1: producer};
// Sequence -> {i: stage i}.  An expression path continues into the rhs of an
// assignment: Binary -> {0: lhs, 1: rhs}; Reduction -> {0: body}.
using StmtPath = std::vector<int>;
using ExprPath = std::vector<int>;

/// Identifies one sub-expression inside one assignment of a statement.
struct ExprLoc {
  StmtPath stmtPath;  // to the assignment
  ExprPath exprPath;  // into its rhs
};

const StmtContent* stmtAt(const Stmt& root, const StmtPath& path);
const ExprContent* exprAt(const Expr& root, const ExprPath& path);

Stmt replaceStmtAt(const Stmt& root, const StmtPath& path, Stmt replacement);
Expr replaceExprAt(const Expr& root, const ExprPath& path, Expr replacement);

/// All matches of `pattern` (by-name structural equality) in the statement's
/// assignments, ordered by a pre-order traversal so the first element is the
/// leftmost match.
std::vector<ExprLoc> findExpr(const Stmt& root, const Expr& pattern);

/// Next unused name with the given prefix among t0,t1,.../w0,w1,... in stmt.
std::string freshName(const Stmt& stmt, const std::string& prefix);

}  // namespace stam
