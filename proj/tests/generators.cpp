#include "generators.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace stam::testing {

std::vector<std::pair<std::vector<int64_t>, double>> randomEntries(
    const std::vector<int64_t>& dims, double density, Rng& rng) {
  int64_t total = 1;
  for (int64_t d : dims) total *= d;
  int64_t target = std::min<int64_t>(total, (int64_t)llround(density * total));
  std::set<int64_t> chosen;
  if (target == total) {
    for (int64_t p = 0; p < total; p++) chosen.insert(p);
  } else {
    while ((int64_t)chosen.size() < target) {
      chosen.insert(uniformInt(rng, total));
    }
  }
  std::vector<std::pair<std::vector<int64_t>, double>> entries;
  entries.reserve(chosen.size());
  for (int64_t p : chosen) {
    std::vector<int64_t> coords(dims.size());
    int64_t rem = p;
    for (int d = (int)dims.size() - 1; d >= 0; d--) {
      coords[d] = rem % dims[d];
      rem /= dims[d];
    }
    entries.emplace_back(std::move(coords), uniformValue(rng));
  }
  return entries;
}

// The statement generator builds small kernels of the shapes the transform
// module produces: forall chains over assignments or increments, optionally
// split by a where over a scalar or vector temporary.
RandomStmt randomConcreteStmt(Rng& rng) {
  RandomStmt out;
  int resultOrder = (int)uniformInt(rng, 3);  // 0..2
  int reductionVars = 1 + (int)uniformInt(rng, 2);

  std::vector<IndexVar> resultVars, redVars;
  std::vector<int64_t> resultDims;
  const char* names[] = {"i", "j", "k", "l", "m"};
  int nameAt = 0;
  for (int m = 0; m < resultOrder; m++) {
    resultVars.push_back(makeIndexVar(names[nameAt++]));
    resultDims.push_back(2 + uniformInt(rng, 7));
  }
  for (int m = 0; m < reductionVars; m++) {
    redVars.push_back(makeIndexVar(names[nameAt++]));
  }
  std::vector<int64_t> redDims;
  for (int m = 0; m < reductionVars; m++) redDims.push_back(2 + uniformInt(rng, 7));

  TensorVar result = makeTensorVar("R", resultOrder);
  out.resultName = "R";

  // Two operand tensors over a mix of result and reduction variables.
  int operands = 2 + (int)uniformInt(rng, 2);
  Expr rhs;
  for (int t = 0; t < operands; t++) {
    std::vector<IndexVar> vars;
    std::vector<int64_t> dims;
    for (int m = 0; m < resultOrder; m++) {
      if (uniformInt(rng, 2) == 0 || t == 0) {
        vars.push_back(resultVars[m]);
        dims.push_back(resultDims[m]);
      }
    }
    for (int m = 0; m < reductionVars; m++) {
      if (uniformInt(rng, 2) == 0 || t == 0) {
        vars.push_back(redVars[m]);
        dims.push_back(redDims[m]);
      }
    }
    if (vars.empty()) {
      vars.push_back(redVars[0]);
      dims.push_back(redDims[0]);
    }
    std::string name = std::string(1, (char)('B' + t));
    TensorVar tensor = makeTensorVar(name, (int)vars.size());
    out.inputDims[name] = dims;
    Expr acc = access(tensor, vars);
    if (!rhs) {
      rhs = acc;
    } else {
      rhs = uniformInt(rng, 2) == 0 ? add(rhs, acc) : mul(rhs, acc);
    }
  }

  // Ensure every result variable is used on the right-hand side so the
  // result dimensions are inferable.
  auto freeVars = freeIndexVars(rhs);
  for (int m = 0; m < resultOrder; m++) {
    if (std::find(freeVars.begin(), freeVars.end(), resultVars[m]) ==
        freeVars.end()) {
      std::string name = "U" + std::to_string(m);
      TensorVar tensor = makeTensorVar(name, 1);
      out.inputDims[name] = {resultDims[m]};
      rhs = mul(rhs, access(tensor, {resultVars[m]}));
    }
  }

  // Either a direct increment over all variables or a scalar-temporary
  // where statement, the two shapes lowering produces.
  if (uniformInt(rng, 2) == 0) {
    std::vector<IndexVar> all = resultVars;
    all.insert(all.end(), redVars.begin(), redVars.end());
    std::shuffle(all.begin(), all.end(), rng);
    // Keep result variables ahead of any reduction variable they dominate is
    // not required for increments; any order is well-formed.
    out.stmt = forall(all, assign(access(result, resultVars), BinaryOp::Add, rhs));
  } else {
    TensorVar temp = makeTensorVar("t0", 0, true);
    Stmt consumer = assign(access(result, resultVars), std::nullopt,
                           access(temp, {}));
    Stmt producer = forall(redVars, assign(access(temp, {}), BinaryOp::Add, rhs));
    out.stmt = forall(resultVars, where(consumer, producer));
  }
  return out;
}

}  // namespace stam::testing
