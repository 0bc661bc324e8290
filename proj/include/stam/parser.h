#pragma once

#include <map>
#include <string>
#include <vector>

#include "stam/notation.h"

namespace stam {

/// Interning scope for a parse session.  Sharing one context across several
/// parses (an expression plus its schedule patterns, say) makes names
/// resolve to the same variables.
struct ParserContext {
  std::map<std::string, TensorVar> tensors;
  std::map<std::string, IndexVar> indexVars;
  /// Declared tensor shapes; when present, accesses are checked for
  /// dimension consistency across shared index variables.
  std::map<std::string, std::vector<int64_t>> declaredDims;
};

/// Parses source index notation, e.g. "A(i,j) = sum(k)(B(i,k)*C(k,j))".
/// The result tensor may not appear on the right-hand side.
SourceExpr parseSource(const std::string& text, ParserContext& ctx);
SourceExpr parseSource(const std::string& text);

/// Parses concrete index notation, e.g.
/// "forall(i) ((forall(j) A(i,j) = w0(j)) where (forall(k,j) w0(j) += B(i,k)*C(k,j)))".
Stmt parseStmt(const std::string& text, ParserContext& ctx);
Stmt parseStmt(const std::string& text);

/// Parses a bare scalar expression (used for schedule patterns).
Expr parseExpr(const std::string& text, ParserContext& ctx);

/// Index variable dimensions implied by accesses against the given tensor
/// shapes; fails on conflicts.  Tensors absent from the map are skipped.
using VarDims = std::map<IndexVar, int64_t, std::owner_less<IndexVar>>;
VarDims varDimensions(const Stmt& stmt,
                      const std::map<std::string, std::vector<int64_t>>& dims);
VarDims varDimensions(const SourceExpr& src,
                      const std::map<std::string, std::vector<int64_t>>& dims);

}  // namespace stam
