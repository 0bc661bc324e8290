#pragma once

#include <string>

#include "stam/notation.h"

namespace stam {

/// Canonical text forms.  printStmt round-trips with parseStmt and printExpr
/// with the expression grammar, which golden tests rely on.
std::string printExpr(const Expr& expr);
std::string printStmt(const Stmt& stmt);
std::string printSource(const SourceExpr& src);

}  // namespace stam
