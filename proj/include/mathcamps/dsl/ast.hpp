#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mathcamps/dsl/number.hpp"

namespace mathcamps {

/// Single lowercase ASCII letter.
using VarName = char;

inline bool is_valid_var_name(char c) { return c >= 'a' && c <= 'z'; }

enum class BinaryOp { add, sub, mul, div, pow };

inline char op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return '+';
    case BinaryOp::sub: return '-';
    case BinaryOp::mul: return '*';
    case BinaryOp::div: return '/';
    case BinaryOp::pow: return '^';
  }
  return '?';
}

inline int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::add:
    case BinaryOp::sub: return 1;
    case BinaryOp::mul:
    case BinaryOp::div: return 2;
    case BinaryOp::pow: return 3;
  }
  return 0;
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Const {
  ExactNumber value;
};

struct VarRef {
  VarName name;
};

struct BinOp {
  BinaryOp op;
  ExprPtr left;
  ExprPtr right;
};

/// Square (degree 2) or cube (degree 3) root.
struct Root {
  int degree;
  ExprPtr radicand;
};

/// Immutable expression node; children are shared.
struct Expr {
  std::variant<Const, VarRef, BinOp, Root> node;

  bool is_const() const { return std::holds_alternative<Const>(node); }
  bool is_var() const { return std::holds_alternative<VarRef>(node); }
  bool is_binop() const { return std::holds_alternative<BinOp>(node); }
  bool is_root() const { return std::holds_alternative<Root>(node); }
};

inline ExprPtr make_const(ExactNumber v) { return std::make_shared<const Expr>(Expr{Const{std::move(v)}}); }
inline ExprPtr make_const(long v) { return make_const(ExactNumber(v)); }
inline ExprPtr make_var(VarName name) { return std::make_shared<const Expr>(Expr{VarRef{name}}); }
inline ExprPtr make_binop(BinaryOp op, ExprPtr left, ExprPtr right) {
  return std::make_shared<const Expr>(Expr{BinOp{op, std::move(left), std::move(right)}});
}
inline ExprPtr make_root(int degree, ExprPtr radicand) {
  return std::make_shared<const Expr>(Expr{Root{degree, std::move(radicand)}});
}

/// Deep structural equality (constants compare value and display form).
inline bool expr_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (auto* c = std::get_if<Const>(&a.node)) return c->value == std::get<Const>(b.node).value;
  if (auto* v = std::get_if<VarRef>(&a.node)) return v->name == std::get<VarRef>(b.node).name;
  if (auto* op = std::get_if<BinOp>(&a.node)) {
    const auto& other = std::get<BinOp>(b.node);
    return op->op == other.op && expr_equal(*op->left, *other.left) &&
           expr_equal(*op->right, *other.right);
  }
  const auto& r = std::get<Root>(a.node);
  const auto& other = std::get<Root>(b.node);
  return r.degree == other.degree && expr_equal(*r.radicand, *other.radicand);
}

/// Pre-order walk.
inline void visit_preorder(const ExprPtr& e, const std::function<void(const ExprPtr&)>& fn) {
  fn(e);
  if (auto* op = std::get_if<BinOp>(&e->node)) {
    visit_preorder(op->left, fn);
    visit_preorder(op->right, fn);
  } else if (auto* r = std::get_if<Root>(&e->node)) {
    visit_preorder(r->radicand, fn);
  }
}

inline void collect_vars(const ExprPtr& e, std::set<VarName>& out) {
  visit_preorder(e, [&](const ExprPtr& n) {
    if (auto* v = std::get_if<VarRef>(&n->node)) out.insert(v->name);
  });
}

inline std::size_t count_var_refs(const ExprPtr& e, VarName name) {
  std::size_t n = 0;
  visit_preorder(e, [&](const ExprPtr& node) {
    if (auto* v = std::get_if<VarRef>(&node->node); v && v->name == name) ++n;
  });
  return n;
}

/// Replaces every reference to `name` with `replacement`.
inline ExprPtr substitute(const ExprPtr& e, VarName name, const ExprPtr& replacement) {
  return std::visit(
      [&](const auto& n) -> ExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarRef>) {
          return n.name == name ? replacement : e;
        } else if constexpr (std::is_same_v<T, BinOp>) {
          auto l = substitute(n.left, name, replacement);
          auto r = substitute(n.right, name, replacement);
          if (l == n.left && r == n.right) return e;
          return make_binop(n.op, std::move(l), std::move(r));
        } else if constexpr (std::is_same_v<T, Root>) {
          auto r = substitute(n.radicand, name, replacement);
          if (r == n.radicand) return e;
          return make_root(n.degree, std::move(r));
        } else {
          return e;
        }
      },
      e->node);
}

/// Depth counting operator nodes: leaves are 0.
inline int expr_depth(const ExprPtr& e) {
  if (auto* op = std::get_if<BinOp>(&e->node))
    return 1 + std::max(expr_depth(op->left), expr_depth(op->right));
  if (auto* r = std::get_if<Root>(&e->node)) return 1 + expr_depth(r->radicand);
  return 0;
}

/// `lhs = rhs`. Whether it defines a variable or constrains unknowns depends on
/// its position in the problem; see `SymbolicProblem::is_definition`.
struct Statement {
  ExprPtr lhs;
  ExprPtr rhs;
};

inline bool statement_equal(const Statement& a, const Statement& b) {
  return expr_equal(*a.lhs, *b.lhs) && expr_equal(*a.rhs, *b.rhs);
}

inline std::set<VarName> statement_vars(const Statement& s) {
  std::set<VarName> vars;
  collect_vars(s.lhs, vars);
  collect_vars(s.rhs, vars);
  return vars;
}

struct Question {
  VarName target_alias = 'h';
  std::vector<VarName> targets;

  friend bool operator==(const Question&, const Question&) = default;
};

/// Ordered statements plus a question.
struct SymbolicProblem {
  std::vector<Statement> statements;
  Question question;

  /// Statement i defines its lhs variable iff the lhs is a bare variable that
  /// appears nowhere earlier and not in its own rhs.
  bool is_definition(std::size_t i) const {
    const auto& s = statements.at(i);
    auto* v = std::get_if<VarRef>(&s.lhs->node);
    if (!v) return false;
    if (count_var_refs(s.rhs, v->name) > 0) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (statement_vars(statements[j]).count(v->name)) return false;
    return true;
  }

  /// Variable defined by statement i, if it is a definition.
  std::optional<VarName> defined_var(std::size_t i) const {
    if (!is_definition(i)) return std::nullopt;
    return std::get<VarRef>(statements[i].lhs->node).name;
  }

  std::set<VarName> all_vars() const {
    std::set<VarName> out;
    for (const auto& s : statements) {
      collect_vars(s.lhs, out);
      collect_vars(s.rhs, out);
    }
    return out;
  }

  /// Variables that no definition determines (solved from constraints).
  std::set<VarName> unknowns() const {
    auto vars = all_vars();
    for (std::size_t i = 0; i < statements.size(); ++i)
      if (auto d = defined_var(i)) vars.erase(*d);
    return vars;
  }
};

inline bool problem_equal(const SymbolicProblem& a, const SymbolicProblem& b) {
  if (a.statements.size() != b.statements.size()) return false;
  for (std::size_t i = 0; i < a.statements.size(); ++i)
    if (!statement_equal(a.statements[i], b.statements[i])) return false;
  return a.question == b.question;
}

/// Every constant node, with its location, in pre-order (lhs before rhs).
enum class Side { lhs, rhs };

struct ConstantPath {
  std::size_t statement = 0;
  Side side = Side::rhs;
  /// 0 = left child / radicand, 1 = right child.
  std::vector<int> steps;

  friend bool operator==(const ConstantPath&, const ConstantPath&) = default;
};

inline std::vector<std::pair<ConstantPath, ExactNumber>> enumerate_constants(const SymbolicProblem& p) {
  std::vector<std::pair<ConstantPath, ExactNumber>> out;
  std::function<void(const ExprPtr&, ConstantPath&)> walk = [&](const ExprPtr& e, ConstantPath& path) {
    if (auto* c = std::get_if<Const>(&e->node)) {
      out.emplace_back(path, c->value);
    } else if (auto* op = std::get_if<BinOp>(&e->node)) {
      path.steps.push_back(0);
      walk(op->left, path);
      path.steps.back() = 1;
      walk(op->right, path);
      path.steps.pop_back();
    } else if (auto* r = std::get_if<Root>(&e->node)) {
      path.steps.push_back(0);
      walk(r->radicand, path);
      path.steps.pop_back();
    }
  };
  for (std::size_t i = 0; i < p.statements.size(); ++i) {
    ConstantPath path{i, Side::lhs, {}};
    walk(p.statements[i].lhs, path);
    path.side = Side::rhs;
    walk(p.statements[i].rhs, path);
  }
  return out;
}

/// Operators used anywhere in the problem (roots reported as degree 2/3).
struct OperatorUse {
  std::set<BinaryOp> binary;
  std::set<int> root_degrees;
};

inline OperatorUse operators_used(const SymbolicProblem& p) {
  OperatorUse use;
  auto scan = [&](const ExprPtr& e) {
    visit_preorder(e, [&](const ExprPtr& n) {
      if (auto* op = std::get_if<BinOp>(&n->node)) use.binary.insert(op->op);
      if (auto* r = std::get_if<Root>(&n->node)) use.root_degrees.insert(r->degree);
    });
  };
  for (const auto& s : p.statements) {
    scan(s.lhs);
    scan(s.rhs);
  }
  return use;
}

}  // namespace mathcamps
