#include "stam/printer.h"

#include <charconv>
#include <sstream>

namespace stam {

namespace {

std::string printLiteral(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

void printExprTo(std::ostream& out, const Expr& expr, int parentPrec) {
  switch (expr->kind) {
    case ExprKind::Literal:
      out << printLiteral(expr->value);
      return;
    case ExprKind::Access: {
      out << expr->tensor->name;
      if (!expr->indices.empty()) {
        out << "(";
        for (size_t i = 0; i < expr->indices.size(); i++) {
          if (i) out << ",";
          out << expr->indices[i]->name;
        }
        out << ")";
      }
      return;
    }
    case ExprKind::Binary: {
      int prec = expr->op == BinaryOp::Mul ? 2 : 1;
      bool parens = prec < parentPrec;
      if (parens) out << "(";
      printExprTo(out, expr->lhs, prec);
      out << (expr->op == BinaryOp::Mul ? "*" : " + ");
      printExprTo(out, expr->rhs, prec + 1);  // left-associative
      if (parens) out << ")";
      return;
    }
    case ExprKind::Reduction: {
      out << "sum(";
      for (size_t i = 0; i < expr->reductionVars.size(); i++) {
        if (i) out << ",";
        out << expr->reductionVars[i]->name;
      }
      out << ")(";
      printExprTo(out, expr->body, 0);
      out << ")";
      return;
    }
  }
}

void printStmtTo(std::ostream& out, const Stmt& stmt) {
  switch (stmt->kind) {
    case StmtKind::Assign: {
      printExprTo(out, stmt->lhs, 0);
      out << (stmt->op ? (std::string(" ") + opSymbol(*stmt->op) + "= ")
                       : std::string(" = "));
      printExprTo(out, stmt->rhs, 0);
      return;
    }
    case StmtKind::Forall: {
      out << "forall(";
      Stmt node = stmt;
      bool first = true;
      while (node->kind == StmtKind::Forall) {
        if (!first) out << ",";
        out << node->var->name;
        first = false;
        node = node->body;
      }
      out << ") ";
      // Wrap everything but a plain assignment so the forall body is
      // unambiguous.
      if (node->kind == StmtKind::Assign) {
        printStmtTo(out, node);
      } else {
        out << "(";
        printStmtTo(out, node);
        out << ")";
      }
      return;
    }
    case StmtKind::Where: {
      out << "(";
      printStmtTo(out, stmt->consumer);
      out << ") where (";
      printStmtTo(out, stmt->producer);
      out << ")";
      return;
    }
    case StmtKind::Sequence: {
      out << "(";
      for (size_t i = 0; i < stmt->stmts.size(); i++) {
        if (i) out << " ; ";
        printStmtTo(out, stmt->stmts[i]);
      }
      out << ")";
      return;
    }
  }
}

}  // namespace

std::string printExpr(const Expr& expr) {
  std::ostringstream out;
  printExprTo(out, expr, 0);
  return out.str();
}

std::string printStmt(const Stmt& stmt) {
  std::ostringstream out;
  printStmtTo(out, stmt);
  return out.str();
}

std::string printSource(const SourceExpr& src) {
  std::ostringstream out;
  printExprTo(out, src.lhs, 0);
  out << " = ";
  printExprTo(out, src.rhs, 0);
  return out.str();
}

}  // namespace stam
