#include "stam/parser.h"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace stam {

namespace {

enum class TokenKind {
  Ident, Number, LParen, RParen, Comma, Semicolon,
  Assign, AddAssign, Plus, Star, End,
};

struct Token {
  TokenKind kind;
  std::string text;
  double number = 0.0;
  size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return token_; }

  Token next() {
    Token t = token_;
    advance();
    return t;
  }

  [[noreturn]] void error(const std::string& message) const {
    std::ostringstream out;
    out << message << " at offset " << token_.offset;
    if (token_.kind != TokenKind::End) out << " near '" << token_.text << "'";
    fail(ErrorCode::Parse, out.str());
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace((unsigned char)text_[pos_])) {
      pos_++;
    }
    token_.offset = pos_;
    if (pos_ >= text_.size()) {
      token_ = {TokenKind::End, "", 0.0, pos_};
      return;
    }
    char c = text_[pos_];
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_')) {
        pos_++;
      }
      token_ = {TokenKind::Ident, text_.substr(start, pos_ - start), 0.0, start};
      return;
    }
    if (std::isdigit((unsigned char)c) ||
        (c == '.' && pos_ + 1 < text_.size() &&
         std::isdigit((unsigned char)text_[pos_ + 1]))) {
      size_t start = pos_;
      char* end = nullptr;
      double value = std::strtod(text_.c_str() + start, &end);
      pos_ = end - text_.c_str();
      token_ = {TokenKind::Number, text_.substr(start, pos_ - start), value,
                start};
      return;
    }
    size_t start = pos_;
    switch (c) {
      case '(': token_ = {TokenKind::LParen, "(", 0.0, start}; pos_++; return;
      case ')': token_ = {TokenKind::RParen, ")", 0.0, start}; pos_++; return;
      case ',': token_ = {TokenKind::Comma, ",", 0.0, start}; pos_++; return;
      case ';': token_ = {TokenKind::Semicolon, ";", 0.0, start}; pos_++; return;
      case '=': token_ = {TokenKind::Assign, "=", 0.0, start}; pos_++; return;
      case '*': token_ = {TokenKind::Star, "*", 0.0, start}; pos_++; return;
      case '+':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
          token_ = {TokenKind::AddAssign, "+=", 0.0, start};
          pos_ += 2;
        } else {
          token_ = {TokenKind::Plus, "+", 0.0, start};
          pos_++;
        }
        return;
      default: {
        token_ = {TokenKind::Ident, std::string(1, c), 0.0, start};
        fail(ErrorCode::Parse, "unexpected character '" + std::string(1, c) +
                                   "' at offset " + std::to_string(start));
      }
    }
  }

  const std::string& text_;
  size_t pos_ = 0;
  Token token_;
};

bool isKeyword(const std::string& name) {
  return name == "sum" || name == "forall" || name == "where";
}

class Parser {
 public:
  Parser(const std::string& text, ParserContext& ctx)
      : lexer_(text), ctx_(ctx) {}

  SourceExpr parseSource() {
    Expr lhs = parseAccess();
    expect(TokenKind::Assign, "expected '='");
    Expr rhs = parseSum();
    expect(TokenKind::End, "trailing input after expression");
    if (usesTensor(rhs, lhs->tensor)) {
      fail(ErrorCode::IllFormed, "result tensor " + lhs->tensor->name +
                                     " may not appear on the right-hand side");
    }
    return {lhs, rhs};
  }

  Stmt parseStmtTop() {
    Stmt stmt = parseStmt();
    expect(TokenKind::End, "trailing input after statement");
    return stmt;
  }

  Expr parseExprTop() {
    Expr expr = parseSum();
    expect(TokenKind::End, "trailing input after expression");
    return expr;
  }

 private:
  Token expect(TokenKind kind, const std::string& message) {
    if (lexer_.peek().kind != kind) lexer_.error(message);
    return lexer_.next();
  }

  // stmt := unit ('where' '(' stmt ')')*
  Stmt parseStmt() {
    Stmt stmt = parseUnit();
    while (lexer_.peek().kind == TokenKind::Ident &&
           lexer_.peek().text == "where") {
      lexer_.next();
      expect(TokenKind::LParen, "expected '(' after where");
      Stmt producer = parseStmt();
      expect(TokenKind::RParen, "expected ')' after where producer");
      stmt = where(stmt, producer);
    }
    return stmt;
  }

  // unit := 'forall' '(' vars ')' body | '(' stmt (';' stmt)* ')' | assign
  Stmt parseUnit() {
    const Token& t = lexer_.peek();
    if (t.kind == TokenKind::Ident && t.text == "forall") {
      lexer_.next();
      std::vector<IndexVar> vars = parseVarList();
      Stmt body;
      if (lexer_.peek().kind == TokenKind::LParen) {
        lexer_.next();
        body = parseStmt();
        expect(TokenKind::RParen, "expected ')' after forall body");
      } else {
        body = parseAssign();
      }
      return forall(vars, body);
    }
    if (t.kind == TokenKind::LParen) {
      lexer_.next();
      std::vector<Stmt> stmts;
      stmts.push_back(parseStmt());
      while (lexer_.peek().kind == TokenKind::Semicolon) {
        lexer_.next();
        stmts.push_back(parseStmt());
      }
      expect(TokenKind::RParen, "expected ')'");
      if (stmts.size() == 1) return stmts[0];
      return sequence(std::move(stmts));
    }
    return parseAssign();
  }

  Stmt parseAssign() {
    Expr lhs = parseAccess();
    std::optional<BinaryOp> op;
    if (lexer_.peek().kind == TokenKind::AddAssign) {
      lexer_.next();
      op = BinaryOp::Add;
    } else {
      expect(TokenKind::Assign, "expected '=' or '+='");
    }
    Expr rhs = parseSum();
    if (usesTensor(rhs, lhs->tensor)) {
      fail(ErrorCode::IllFormed, "result tensor " + lhs->tensor->name +
                                     " may not appear on the right-hand side");
    }
    return assign(lhs, op, rhs);
  }

  std::vector<IndexVar> parseVarList() {
    expect(TokenKind::LParen, "expected '('");
    std::vector<IndexVar> vars;
    for (;;) {
      Token name = expect(TokenKind::Ident, "expected index variable");
      if (isKeyword(name.text)) lexer_.error("reserved word used as variable");
      vars.push_back(indexVar(name.text));
      if (lexer_.peek().kind != TokenKind::Comma) break;
      lexer_.next();
    }
    expect(TokenKind::RParen, "expected ')'");
    return vars;
  }

  // expr := term ('+' term)*
  Expr parseSum() {
    Expr expr = parseTerm();
    while (lexer_.peek().kind == TokenKind::Plus) {
      lexer_.next();
      expr = add(expr, parseTerm());
    }
    return expr;
  }

  // term := factor ('*' factor)*
  Expr parseTerm() {
    Expr expr = parseFactor();
    while (lexer_.peek().kind == TokenKind::Star) {
      lexer_.next();
      expr = mul(expr, parseFactor());
    }
    return expr;
  }

  Expr parseFactor() {
    const Token& t = lexer_.peek();
    if (t.kind == TokenKind::Number) {
      return literal(lexer_.next().number);
    }
    if (t.kind == TokenKind::LParen) {
      lexer_.next();
      Expr expr = parseSum();
      expect(TokenKind::RParen, "expected ')'");
      return expr;
    }
    if (t.kind == TokenKind::Ident && t.text == "sum") {
      lexer_.next();
      std::vector<IndexVar> vars = parseVarList();
      expect(TokenKind::LParen, "expected '(' after sum variables");
      Expr body = parseSum();
      expect(TokenKind::RParen, "expected ')' after sum body");
      return reduction(vars, body);
    }
    if (t.kind == TokenKind::Ident) {
      return parseAccess();
    }
    lexer_.error("expected expression");
  }

  Expr parseAccess() {
    Token name = expect(TokenKind::Ident, "expected tensor name");
    if (isKeyword(name.text)) lexer_.error("reserved word used as tensor");
    std::vector<IndexVar> indices;
    if (lexer_.peek().kind == TokenKind::LParen) {
      indices = parseVarList();
    }
    TensorVar tensor = tensorVar(name.text, (int)indices.size(), name.offset);
    return access(tensor, indices);
  }

  IndexVar indexVar(const std::string& name) {
    auto it = ctx_.indexVars.find(name);
    if (it != ctx_.indexVars.end()) return it->second;
    IndexVar var = makeIndexVar(name);
    ctx_.indexVars.emplace(name, var);
    return var;
  }

  TensorVar tensorVar(const std::string& name, int order, size_t offset) {
    auto it = ctx_.tensors.find(name);
    if (it != ctx_.tensors.end()) {
      if (it->second->order != order) {
        fail(ErrorCode::ArityMismatch,
             "tensor " + name + " used with " + std::to_string(order) +
                 " indices but has order " + std::to_string(it->second->order) +
                 " (offset " + std::to_string(offset) + ")");
      }
      return it->second;
    }
    auto declared = ctx_.declaredDims.find(name);
    if (declared != ctx_.declaredDims.end() &&
        (int)declared->second.size() != order) {
      fail(ErrorCode::ArityMismatch,
           "tensor " + name + " declared with order " +
               std::to_string(declared->second.size()) + " but accessed with " +
               std::to_string(order) + " indices");
    }
    TensorVar tensor = makeTensorVar(name, order);
    ctx_.tensors.emplace(name, tensor);
    return tensor;
  }

  Lexer lexer_;
  ParserContext& ctx_;
};

void mergeDim(VarDims& dims, const IndexVar& var, int64_t dim) {
  auto [it, inserted] = dims.emplace(var, dim);
  if (!inserted && it->second != dim) {
    fail(ErrorCode::DimensionMismatch,
         "index variable " + var->name + " ranges over dimensions " +
             std::to_string(it->second) + " and " + std::to_string(dim));
  }
}

void collectDims(const Expr& expr,
                 const std::map<std::string, std::vector<int64_t>>& tensorDims,
                 VarDims& dims) {
  switch (expr->kind) {
    case ExprKind::Literal: return;
    case ExprKind::Access: {
      auto it = tensorDims.find(expr->tensor->name);
      if (it == tensorDims.end()) return;
      if (it->second.size() != expr->indices.size()) {
        fail(ErrorCode::ArityMismatch,
             "tensor " + expr->tensor->name + " bound with order " +
                 std::to_string(it->second.size()) + " but accessed with " +
                 std::to_string(expr->indices.size()) + " indices");
      }
      for (size_t mode = 0; mode < expr->indices.size(); mode++) {
        mergeDim(dims, expr->indices[mode], it->second[mode]);
      }
      return;
    }
    case ExprKind::Binary:
      collectDims(expr->lhs, tensorDims, dims);
      collectDims(expr->rhs, tensorDims, dims);
      return;
    case ExprKind::Reduction:
      collectDims(expr->body, tensorDims, dims);
      return;
  }
}

void collectDims(const Stmt& stmt,
                 const std::map<std::string, std::vector<int64_t>>& tensorDims,
                 VarDims& dims) {
  switch (stmt->kind) {
    case StmtKind::Assign:
      collectDims(stmt->lhs, tensorDims, dims);
      collectDims(stmt->rhs, tensorDims, dims);
      return;
    case StmtKind::Forall: collectDims(stmt->body, tensorDims, dims); return;
    case StmtKind::Where:
      collectDims(stmt->consumer, tensorDims, dims);
      collectDims(stmt->producer, tensorDims, dims);
      return;
    case StmtKind::Sequence:
      for (const Stmt& s : stmt->stmts) collectDims(s, tensorDims, dims);
      return;
  }
}

}  // namespace

SourceExpr parseSource(const std::string& text, ParserContext& ctx) {
  SourceExpr src = Parser(text, ctx).parseSource();
  if (!ctx.declaredDims.empty()) varDimensions(src, ctx.declaredDims);
  return src;
}

SourceExpr parseSource(const std::string& text) {
  ParserContext ctx;
  return parseSource(text, ctx);
}

Stmt parseStmt(const std::string& text, ParserContext& ctx) {
  Stmt stmt = Parser(text, ctx).parseStmtTop();
  if (!ctx.declaredDims.empty()) varDimensions(stmt, ctx.declaredDims);
  return stmt;
}

Stmt parseStmt(const std::string& text) {
  ParserContext ctx;
  return parseStmt(text, ctx);
}

Expr parseExpr(const std::string& text, ParserContext& ctx) {
  return Parser(text, ctx).parseExprTop();
}

VarDims varDimensions(
    const Stmt& stmt,
    const std::map<std::string, std::vector<int64_t>>& dims) {
  VarDims out;
  collectDims(stmt, dims, out);
  return out;
}

VarDims varDimensions(
    const SourceExpr& src,
    const std::map<std::string, std::vector<int64_t>>& dims) {
  VarDims out;
  collectDims(src.lhs, dims, out);
  collectDims(src.rhs, dims, out);
  return out;
}

}  // namespace stam
