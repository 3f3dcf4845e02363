#pragma once

#include <optional>
#include <string_view>

#include "mathcamps/dsl/ast.hpp"
#include "mathcamps/dsl/dependency_graph.hpp"

namespace mathcamps {

enum class TransformKind { no_useless_variables, simplify };

inline const char* to_string(TransformKind t) {
  return t == TransformKind::no_useless_variables ? "NoUselessVariables" : "Simplify";
}

inline std::optional<TransformKind> transform_from_string(std::string_view s) {
  if (s == "NoUselessVariables") return TransformKind::no_useless_variables;
  if (s == "Simplify") return TransformKind::simplify;
  return std::nullopt;
}

/// Dead-code elimination: keeps only statements the question depends on.
inline SymbolicProblem transform_no_useless_variables(const SymbolicProblem& p) {
  auto graph = build_dependency_graph(p);
  SymbolicProblem out;
  out.question = p.question;
  for (std::size_t i = 0; i < p.statements.size(); ++i)
    if (graph.question_roots.count(i)) out.statements.push_back(p.statements[i]);
  return out;
}

/// Inlines definitions whose variable is referenced exactly once elsewhere.
/// Question targets are never inlined. Runs to a fixed point.
inline SymbolicProblem transform_simplify(const SymbolicProblem& p) {
  SymbolicProblem cur = p;
  auto is_target = [&](VarName v) {
    for (VarName t : cur.question.targets)
      if (t == v) return true;
    return false;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < cur.statements.size() && !changed; ++i) {
      auto v = cur.defined_var(i);
      if (!v || is_target(*v)) continue;
      std::size_t refs = 0;
      std::size_t use_site = 0;
      for (std::size_t j = 0; j < cur.statements.size(); ++j) {
        if (j == i) continue;
        std::size_t n = count_var_refs(cur.statements[j].lhs, *v) + count_var_refs(cur.statements[j].rhs, *v);
        if (n) use_site = j;
        refs += n;
      }
      if (refs != 1) continue;
      const ExprPtr& body = cur.statements[i].rhs;
      Statement& use = cur.statements[use_site];
      Statement rewritten{substitute(use.lhs, *v, body), substitute(use.rhs, *v, body)};
      SymbolicProblem next = cur;
      next.statements[use_site] = rewritten;
      next.statements.erase(next.statements.begin() + static_cast<std::ptrdiff_t>(i));
      // Inlining into a later definition's lhs would turn it into a constraint
      // that the original did not have; only accept rewrites that keep the
      // use site's role.
      std::size_t new_index = use_site > i ? use_site - 1 : use_site;
      if (cur.is_definition(use_site) != next.is_definition(new_index)) continue;
      cur = std::move(next);
      changed = true;
    }
  }
  return cur;
}

inline SymbolicProblem apply_transform(TransformKind t, const SymbolicProblem& p) {
  return t == TransformKind::no_useless_variables ? transform_no_useless_variables(p) : transform_simplify(p);
}

}  // namespace mathcamps
