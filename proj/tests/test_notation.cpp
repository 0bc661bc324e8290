#include <doctest.h>

#include "generators.h"
#include "stam/parser.h"
#include "stam/printer.h"
#include "stam/wellformed.h"

using namespace stam;

TEST_CASE("parse matmul source") {
  SourceExpr src = parseSource("A(i,j) = sum(k)(B(i,k)*C(k,j))");
  CHECK(src.lhs->tensor->name == "A");
  CHECK(src.rhs->kind == ExprKind::Reduction);
  CHECK(printSource(src) == "A(i,j) = sum(k)(B(i,k)*C(k,j))");
}

TEST_CASE("parse row dot source") {
  SourceExpr src = parseSource("a(i) = sum(j)(B(i,j)*C(i,j))");
  CHECK(src.lhs->indices.size() == 1);
  CHECK(printSource(src) == "a(i) = sum(j)(B(i,j)*C(i,j))");
}

TEST_CASE("result on right-hand side rejected") {
  CHECK_THROWS_WITH_AS(parseSource("A(i,j) = B(i,j) + A(i,j)"),
                       doctest::Contains("may not appear"), Error);
}

TEST_CASE("parse errors carry position") {
  CHECK_THROWS_WITH_AS(parseSource("A(i,j) = B(i,j) +"),
                       doctest::Contains("offset"), Error);
  CHECK_THROWS_AS(parseSource("A(i,j) = B(i)*B(i,j)"), Error);  // arity

  ParserContext ctx;
  ctx.declaredDims = {{"B", {4, 5}}, {"C", {6, 7}}};
  CHECK_THROWS_AS(parseSource("A(i,j) = sum(k)(B(i,k)*C(k,j))", ctx), Error);
}

TEST_CASE("interning shares variables by name") {
  ParserContext ctx;
  SourceExpr src = parseSource("A(i,j) = sum(k)(B(i,k)*C(k,j))", ctx);
  Expr pattern = parseExpr("B(i,k)*C(k,j)", ctx);
  CHECK(equals(pattern, src.rhs->body));
}

TEST_CASE("print statement forms") {
  Stmt stmt = parseStmt("forall(i,k,j) A(i,j) += B(i,k)*C(k,j)");
  CHECK(printStmt(stmt) == "forall(i,k,j) A(i,j) += B(i,k)*C(k,j)");

  Stmt withWhere = parseStmt(
      "forall(i,j) ((A(i,j) = t0) where (forall(k) t0 += B(i,k)*C(k,j)))");
  CHECK(printStmt(withWhere) ==
        "forall(i,j) ((A(i,j) = t0) where (forall(k) t0 += B(i,k)*C(k,j)))");

  Stmt seq = parseStmt("(forall(i) a(i) = b(i) ; forall(i) a(i) += c(i))");
  CHECK(printStmt(seq) == "(forall(i) a(i) = b(i) ; forall(i) a(i) += c(i))");
}

TEST_CASE("precedence printing round trips") {
  ParserContext ctx;
  Expr expr = parseExpr("(a + b)*c + d", ctx);
  CHECK(printExpr(expr) == "(a + b)*c + d");
  Expr expr2 = parseExpr("a*(b + c)", ctx);
  CHECK(printExpr(expr2) == "a*(b + c)");
}

TEST_CASE("free index vars") {
  ParserContext ctx;
  Expr expr = parseExpr("B(i,k)*C(k,j)", ctx);
  auto free = freeIndexVars(expr);
  REQUIRE(free.size() == 3);
  CHECK(free[0]->name == "i");
  CHECK(free[1]->name == "k");
  CHECK(free[2]->name == "j");

  Stmt bound = parseStmt("forall(j) w(j) = B(i,j)");
  auto stmtFree = freeIndexVars(bound);
  REQUIRE(stmtFree.size() == 1);
  CHECK(stmtFree[0]->name == "i");

  CHECK(freeIndexVars(literal(2.0)).empty());
}

TEST_CASE("well-formed inner products statement") {
  Stmt stmt = parseStmt(
      "forall(i,j) ((A(i,j) = t) where (forall(k) t += B(i,k)*C(k,j)))");
  CHECK(checkWellFormed(stmt).empty());
}

TEST_CASE("unbound result index is reported") {
  Stmt stmt = parseStmt("forall(i) A(i,j) = B(i,j)");
  auto violations = checkWellFormed(stmt);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].kind == ViolationKind::UnboundResultIndex);
  CHECK(violations[0].detail == "j");
}

TEST_CASE("shadowed tensor is reported") {
  // The inner producer writes B, but B is also read by the outermost
  // consumer, where it refers to a tensor of the enclosing environment.
  Stmt stmt = parseStmt(
      "(forall(i) a(i) = s*B(i)) where ((forall(j) s += B(j)) where "
      "(forall(k) B(k) = c(k)))");
  auto violations = checkWellFormed(stmt);
  REQUIRE(violations.size() >= 1);
  CHECK(violations[0].kind == ViolationKind::ShadowedTensor);
  CHECK(violations[0].detail == "B");
}

TEST_CASE("forall over non-result variable of plain assign") {
  Stmt stmt = parseStmt("forall(i,k) A(i) = B(i,k)");
  auto violations = checkWellFormed(stmt);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].kind == ViolationKind::ForallOverwritesResult);
  CHECK(violations[0].detail == "k");
}

TEST_CASE("sequence stages must share the result tensor") {
  Stmt stage1 = parseStmt("forall(i) a(i) = b(i)");
  Stmt stage2 = parseStmt("forall(i) c(i) += d(i)");
  Stmt seq = sequence({stage1, stage2});
  auto violations = checkWellFormed(seq);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].kind == ViolationKind::SequenceTensorMismatch);
}

TEST_CASE("parse print identity on random statements") {
  testing::Rng rng(2024);
  for (int trial = 0; trial < 1000; trial++) {
    Stmt stmt = testing::randomConcreteStmt(rng).stmt;
    std::string text = printStmt(stmt);
    Stmt reparsed = parseStmt(text);
    CHECK(printStmt(reparsed) == text);
  }
}
