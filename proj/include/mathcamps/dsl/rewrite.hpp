#pragma once

#include <functional>

#include "mathcamps/dsl/ast.hpp"
#include "mathcamps/error.hpp"

namespace mathcamps {

namespace detail {

inline ExprPtr rewrite_at(const ExprPtr& e, const std::vector<int>& steps, std::size_t depth,
                          const std::function<ExprPtr(const ExprPtr&)>& fn) {
  if (depth == steps.size()) return fn(e);
  int step = steps[depth];
  if (auto* op = std::get_if<BinOp>(&e->node)) {
    if (step == 0) return make_binop(op->op, rewrite_at(op->left, steps, depth + 1, fn), op->right);
    if (step == 1) return make_binop(op->op, op->left, rewrite_at(op->right, steps, depth + 1, fn));
  } else if (auto* r = std::get_if<Root>(&e->node)) {
    if (step == 0) return make_root(r->degree, rewrite_at(r->radicand, steps, depth + 1, fn));
  }
  throw PathInvalidError("constant path leaves the expression tree");
}

}  // namespace detail

/// Copy of `p` with the constant at `path` replaced. Throws PathInvalidError
/// when the path does not end at a constant.
inline SymbolicProblem replace_constant(const SymbolicProblem& p, const ConstantPath& path, const ExactNumber& v) {
  if (path.statement >= p.statements.size()) throw PathInvalidError("statement index out of range");
  SymbolicProblem out = p;
  auto& s = out.statements[path.statement];
  ExprPtr& side = path.side == Side::lhs ? s.lhs : s.rhs;
  side = detail::rewrite_at(side, path.steps, 0, [&](const ExprPtr& node) {
    if (!node->is_const()) throw PathInvalidError("constant path points at a non-constant node");
    return make_const(v);
  });
  return out;
}

inline ExactNumber constant_at(const SymbolicProblem& p, const ConstantPath& path) {
  for (const auto& [where, v] : enumerate_constants(p))
    if (where == path) return v;
  throw PathInvalidError("no constant at path");
}

}  // namespace mathcamps
