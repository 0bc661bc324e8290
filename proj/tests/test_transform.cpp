#include <doctest.h>

#include "stam/parser.h"
#include "stam/printer.h"
#include "stam/transform.h"
#include "stam/wellformed.h"

using namespace stam;

namespace {

ScheduleResult scheduleText(const std::string& expr,
                            const std::string& directives) {
  ParserContext ctx;
  SourceExpr src = parseSource(expr, ctx);
  return schedule(src, parseDirectives(directives, ctx));
}

}  // namespace

TEST_CASE("lowering matmul yields the inner products statement") {
  SourceExpr src = parseSource("A(i,j) = sum(k)(B(i,k)*C(k,j))");
  Stmt stmt = lowerToConcrete(src);
  CHECK(printStmt(stmt) ==
        "forall(i,j) ((A(i,j) = t0) where (forall(k) t0 += B(i,k)*C(k,j)))");
  CHECK(checkWellFormed(stmt).empty());
}

TEST_CASE("lowering row dot products") {
  SourceExpr src = parseSource("a(i) = sum(j)(B(i,j)*C(i,j))");
  CHECK(printStmt(lowerToConcrete(src)) ==
        "forall(i) ((a(i) = t0) where (forall(j) t0 += B(i,j)*C(i,j)))");
}

TEST_CASE("lowering without reduction closes immediately") {
  SourceExpr src = parseSource("A(i,j) = B(i,j) + C(i,j)");
  CHECK(printStmt(lowerToConcrete(src)) ==
        "forall(i,j) A(i,j) = B(i,j) + C(i,j)");
}

TEST_CASE("lowering nested reductions uses fresh temporaries") {
  SourceExpr src = parseSource("a(i) = sum(k)(B(i,k)*sum(l)(C(k,l)*d(l)))");
  Stmt stmt = lowerToConcrete(src);
  CHECK(printStmt(stmt) ==
        "forall(i) ((a(i) = t0) where (forall(k) ((t0 += B(i,k)*t1) where "
        "(forall(l) t1 += C(k,l)*d(l)))))");
  CHECK(checkWellFormed(stmt).empty());
}

TEST_CASE("swap foralls") {
  Stmt stmt = parseStmt("forall(i,j,k) A(i,j) += B(i,k)*C(k,j)");
  Stmt swapped =
      applyEquivalence(stmt, EquivalenceRule::SwapForalls, StmtPath{0});
  CHECK(printStmt(swapped) == "forall(i,k,j) A(i,j) += B(i,k)*C(k,j)");

  // Swapping twice restores the original statement.
  Stmt restored =
      applyEquivalence(swapped, EquivalenceRule::SwapForalls, StmtPath{0});
  CHECK(printStmt(restored) == printStmt(stmt));
}

TEST_CASE("swap foralls refuses sequences") {
  Stmt stmt =
      parseStmt("forall(i,j) ((A(i,j) = B(i,j) ; A(i,j) += C(i,j)))");
  try {
    applyEquivalence(stmt, EquivalenceRule::SwapForalls, StmtPath{});
    FAIL("expected SequencePresent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SequencePresent);
  }
}

TEST_CASE("lift forall out of the consumer") {
  Stmt stmt = parseStmt("(forall(j) A(i,j) = w(j)) where (t = B(i,i))");
  Stmt lifted =
      applyEquivalence(stmt, EquivalenceRule::LiftForallConsumer, StmtPath{});
  CHECK(printStmt(lifted) == "forall(j) ((A(i,j) = w(j)) where (t = B(i,i)))");

  Stmt usesJ = parseStmt("(forall(j) A(i,j) = w(j)) where (t = B(i,j))");
  CHECK_THROWS_AS(
      applyEquivalence(usesJ, EquivalenceRule::LiftForallConsumer, StmtPath{}),
      Error);
}

TEST_CASE("lift forall out of both sides") {
  Stmt stmt =
      parseStmt("(forall(j) A(i,j) = w(j)) where (forall(j) w(j) = B(i,j))");
  Stmt lifted =
      applyEquivalence(stmt, EquivalenceRule::LiftForallBothSides, StmtPath{});
  CHECK(printStmt(lifted) ==
        "forall(j) ((A(i,j) = w(j)) where (w(j) = B(i,j)))");

  // An incrementing producer blocks the lift.
  Stmt increments =
      parseStmt("(forall(j) A(i,j) = w(j)) where (forall(j) w(j) += B(i,j))");
  CHECK_THROWS_AS(applyEquivalence(increments,
                                   EquivalenceRule::LiftForallBothSides,
                                   StmtPath{}),
                  Error);
}

TEST_CASE("rotate where nest") {
  Stmt stmt = parseStmt(
      "((forall(j) A(i,j) = w(j)) where (forall(j) w(j) += v(j))) where "
      "(forall(j) v(j) = B(i,j))");
  Stmt rotated =
      applyEquivalence(stmt, EquivalenceRule::RotateWhereNest, StmtPath{});
  CHECK(printStmt(rotated) ==
        "(forall(j) A(i,j) = w(j)) where ((forall(j) w(j) += v(j)) where "
        "(forall(j) v(j) = B(i,j)))");

  // The consumer reading the outer producer's tensor blocks the rotation.
  Stmt blocked = parseStmt(
      "((forall(j) A(i,j) = w(j)*v(j)) where (forall(j) w(j) += B(i,j))) "
      "where (forall(j) v(j) = C(i,j))");
  CHECK_THROWS_AS(
      applyEquivalence(blocked, EquivalenceRule::RotateWhereNest, StmtPath{}),
      Error);
}

TEST_CASE("swap where producers") {
  Stmt stmt = parseStmt(
      "((forall(j) A(i,j) = w(j)*v(j)) where (forall(j) w(j) = B(i,j))) "
      "where (forall(j) v(j) = C(i,j))");
  Stmt swapped =
      applyEquivalence(stmt, EquivalenceRule::SwapWhereProducers, StmtPath{});
  CHECK(printStmt(swapped) ==
        "((forall(j) A(i,j) = w(j)*v(j)) where (forall(j) v(j) = C(i,j))) "
        "where (forall(j) w(j) = B(i,j))");

  // The producers must be independent of each other.
  Stmt dependent = parseStmt(
      "((forall(j) A(i,j) = w(j)) where (forall(j) w(j) = v(j)*B(i,j))) "
      "where (forall(j) v(j) = C(i,j))");
  CHECK_THROWS_AS(applyEquivalence(dependent,
                                   EquivalenceRule::SwapWhereProducers,
                                   StmtPath{}),
                  Error);
}

TEST_CASE("workspace on matmul reproduces the linear combination split") {
  ScheduleResult result = scheduleText(
      "A(i,j) = sum(k)(B(i,k)*C(k,j))",
      "reorder(i,k,j); workspace(B(i,k)*C(k,j), {j}, dense)");
  CHECK(printStmt(result.stmt) ==
        "forall(i) ((forall(j) A(i,j) = w0(j)) where (forall(k,j) w0(j) += "
        "B(i,k)*C(k,j)))");
  CHECK(result.warnings.empty());
}

TEST_CASE("reorder alone reproduces the linear combination loop order") {
  ScheduleResult result =
      scheduleText("A(i,j) = sum(k)(B(i,k)*C(k,j))", "reorder(i,k,j)");
  CHECK(printStmt(result.stmt) == "forall(i,k,j) A(i,j) += B(i,k)*C(k,j)");
}

TEST_CASE("workspace on row dots keeps the increment consumer") {
  ScheduleResult result =
      scheduleText("a(i) = sum(j)(B(i,j)*C(i,j))",
                   "reorder(i,j); workspace(B(i,j), {j}, dense)");
  CHECK(printStmt(result.stmt) ==
        "forall(i) ((forall(j) a(i) += w0(j)*C(i,j)) where (forall(j) w0(j) "
        "+= B(i,j)))");
}

TEST_CASE("mttkrp first workspace hoists the loop-invariant factor") {
  ScheduleResult result = scheduleText(
      "A(i,j) = sum(k,l)(B(i,k,l)*C(l,j)*D(k,j))",
      "reorder(i,k,l,j); workspace(B(i,k,l)*C(l,j), {j}, dense)");
  CHECK(printStmt(result.stmt) ==
        "forall(i,k) ((forall(j) A(i,j) += w0(j)*D(k,j)) where (forall(l,j) "
        "w0(j) += B(i,k,l)*C(l,j)))");
}

TEST_CASE("mttkrp second workspace rotates into the doubly nested form") {
  ScheduleResult result = scheduleText(
      "A(i,j) = sum(k,l)(B(i,k,l)*C(l,j)*D(k,j))",
      "reorder(i,k,l,j); workspace(B(i,k,l)*C(l,j), {j}, dense); "
      "workspace(w0(j)*D(k,j), {j}, dense)");
  CHECK(printStmt(result.stmt) ==
        "forall(i) ((forall(j) A(i,j) = w1(j)) where (forall(k) ((forall(j) "
        "w1(j) += w0(j)*D(k,j)) where (forall(l,j) w0(j) += "
        "B(i,k,l)*C(l,j)))))");
}

TEST_CASE("vector addition with result reuse becomes a sequence") {
  ScheduleResult result =
      scheduleText("a(i) = b(i) + c(i)", "workspace_reuse(b(i), {i}, dense)");
  CHECK(printStmt(result.stmt) ==
        "(forall(i) a(i) = b(i) ; forall(i) a(i) += c(i))");
}

TEST_CASE("matrix addition workspace then reuse gives three stages") {
  ScheduleResult result = scheduleText(
      "A(i,j) = B(i,j) + C(i,j)",
      "workspace(B(i,j) + C(i,j), {j}, dense); "
      "workspace_reuse(B(i,j), {j}, dense)");
  CHECK(printStmt(result.stmt) ==
        "forall(i) ((forall(j) A(i,j) = w0(j)) where ((forall(j) w0(j) = "
        "B(i,j) ; forall(j) w0(j) += C(i,j))))");
}

TEST_CASE("mttkrp second workspace with reuse is rejected") {
  try {
    scheduleText("A(i,j) = sum(k,l)(B(i,k,l)*C(l,j)*D(k,j))",
                 "reorder(i,k,l,j); workspace(B(i,k,l)*C(l,j), {j}, dense); "
                 "workspace_reuse(w0(j)*D(k,j), {j}, dense)");
    FAIL("expected ReusePrecondition1");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ReusePrecondition1);
  }
}

TEST_CASE("reuse depth precondition") {
  // b is nested underneath two operators: the product and the addition.
  try {
    scheduleText("a(i) = b(i)*c(i) + d(i)",
                 "workspace_reuse(b(i), {i}, dense)");
    FAIL("expected ReusePrecondition2");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ReusePrecondition2);
  }
}

TEST_CASE("distributivity precondition") {
  // Extracting B from (B+C)*d under a + reduction requires the containing +
  // and * to distribute over +; the + does not.
  ParserContext ctx;
  SourceExpr src = parseSource("a(i) = sum(j)((B(i,j) + C(i,j))*d(j))", ctx);
  Stmt stmt = lowerToConcrete(src);
  Expr pattern = parseExpr("B(i,j)", ctx);
  auto matches = findExpr(stmt, pattern);
  REQUIRE(matches.size() == 1);
  WorkspaceDirective directive;
  directive.target = matches[0];
  directive.vars = {ctx.indexVars.at("j")};
  directive.format = denseFormat(1);
  try {
    applyWorkspace(stmt, directive);
    FAIL("expected DistributivityViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DistributivityViolated);
  }
}

TEST_CASE("workspace variable must occur in the expression") {
  try {
    scheduleText("A(i,j) = sum(k)(B(i,k)*C(k,j))",
                 "reorder(i,k,j); workspace(B(i,k), {j}, dense)");
    FAIL("expected VariableNotInScope");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::VariableNotInScope);
  }
}

TEST_CASE("workspace refuses statements containing sequences") {
  Stmt stmt = parseStmt("(forall(i) a(i) = b(i) ; forall(i) a(i) += c(i))");
  ParserContext ctx;
  Expr pattern = parseExpr("b(i)", ctx);
  auto matches = findExpr(stmt, pattern);
  REQUIRE(!matches.empty());
  WorkspaceDirective directive;
  directive.target = matches[0];
  const StmtContent* assignNode = stmtAt(stmt, matches[0].stmtPath);
  directive.vars = {assignNode->lhs->indices[0]};
  directive.format = denseFormat(1);
  try {
    applyWorkspace(stmt, directive);
    FAIL("expected SequencePresent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SequencePresent);
  }
}

TEST_CASE("spadd chain reuses across existing sequences") {
  ScheduleResult result = scheduleText(
      "A(i,j) = B(i,j) + C(i,j) + D(i,j)",
      "workspace(B(i,j) + C(i,j) + D(i,j), {j}, dense); "
      "workspace_reuse(B(i,j) + C(i,j), {j}, dense); "
      "workspace_reuse(B(i,j), {j}, dense)");
  CHECK(printStmt(result.stmt) ==
        "forall(i) ((forall(j) A(i,j) = w0(j)) where ((forall(j) w0(j) = "
        "B(i,j) ; forall(j) w0(j) += C(i,j) ; forall(j) w0(j) += D(i,j))))");
}

TEST_CASE("schedule failures identify the directive") {
  try {
    scheduleText("A(i,j) = sum(k)(B(i,k)*C(k,j))",
                 "reorder(i,k,j); workspace(B(i,k)*C(i,k), {k}, dense)");
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("directive 2") != std::string::npos);
  }
}
