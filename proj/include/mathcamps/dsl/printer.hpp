#pragma once

#include <string>

#include "mathcamps/dsl/ast.hpp"

namespace mathcamps {

namespace detail {

inline bool needs_literal_parens(const ExactNumber& n) {
  return n.is_negative() || n.form() == NumberForm::fraction;
}

inline std::string print_expr(const ExprPtr& e, bool operand);

inline std::string print_child(const ExprPtr& child, BinaryOp parent, bool right) {
  std::string text = print_expr(child, true);
  auto* op = std::get_if<BinOp>(&child->node);
  if (!op) return text;
  int cp = precedence(op->op);
  int pp = precedence(parent);
  bool wrap = right ? cp <= pp : (cp < pp || (parent == BinaryOp::pow && cp == pp));
  return wrap ? "(" + text + ")" : text;
}

// `operand` is true when the expression sits under a BinOp, where signed and
// fractional literals are parenthesized to keep `3/4` apart from division.
inline std::string print_expr(const ExprPtr& e, bool operand) {
  if (auto* c = std::get_if<Const>(&e->node)) {
    std::string s = c->value.to_string();
    return operand && needs_literal_parens(c->value) ? "(" + s + ")" : s;
  }
  if (auto* v = std::get_if<VarRef>(&e->node)) return std::string(1, v->name);
  if (auto* r = std::get_if<Root>(&e->node))
    return std::string(r->degree == 2 ? "sqrt(" : "cbrt(") + print_expr(r->radicand, false) + ")";
  const auto& op = std::get<BinOp>(e->node);
  return print_child(op.left, op.op, false) + " " + op_symbol(op.op) + " " +
         print_child(op.right, op.op, true);
}

}  // namespace detail

/// Minimal-parenthesis rendering that reparses to the same tree.
inline std::string print_expr(const ExprPtr& e) {
  if (auto* c = std::get_if<Const>(&e->node); c && c->value.is_negative())
    return "(" + c->value.to_string() + ")";
  return detail::print_expr(e, false);
}

inline std::string print_statement(const Statement& s) {
  auto side = [](const ExprPtr& e) { return e->is_binop() ? "(" + print_expr(e) + ")" : print_expr(e); };
  return "[[var " + side(s.lhs) + " = " + side(s.rhs) + "]]";
}

inline std::string print_question(const Question& q) {
  std::string out = "[[question ";
  out += q.target_alias;
  out += " = ";
  if (q.targets.size() == 1) {
    out += q.targets.front();
  } else {
    out += "[";
    for (std::size_t i = 0; i < q.targets.size(); ++i) {
      if (i) out += ", ";
      out += '"';
      out += q.targets[i];
      out += '"';
    }
    out += "]";
  }
  return out + "]]";
}

/// Canonical text: one block per line, question last, no trailing newline.
inline std::string print_problem(const SymbolicProblem& p) {
  std::string out;
  for (const auto& s : p.statements) {
    out += print_statement(s);
    out += '\n';
  }
  out += print_question(p.question);
  return out;
}

}  // namespace mathcamps
