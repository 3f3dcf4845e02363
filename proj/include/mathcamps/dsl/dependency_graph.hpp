#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "mathcamps/dsl/ast.hpp"
#include "mathcamps/error.hpp"

namespace mathcamps {

/// Use-def graph between statements.
///
/// A defined variable is determined by its definition; an unknown is
/// determined jointly by every constraint that mentions it. Edge i -> j means
/// statement j uses a variable that statement i determines.
struct DependencyGraph {
  std::size_t node_count = 0;
  std::set<std::pair<std::size_t, std::size_t>> edges;
  std::set<std::size_t> question_roots;
};

/// Statements that determine each variable.
inline std::map<VarName, std::set<std::size_t>> determiners(const SymbolicProblem& p) {
  std::map<VarName, std::set<std::size_t>> det;
  std::set<VarName> defined;
  for (std::size_t i = 0; i < p.statements.size(); ++i) {
    if (auto v = p.defined_var(i)) {
      det[*v].insert(i);
      defined.insert(*v);
    }
  }
  for (std::size_t i = 0; i < p.statements.size(); ++i) {
    if (p.is_definition(i)) continue;
    for (VarName v : statement_vars(p.statements[i]))
      if (!defined.count(v)) det[v].insert(i);
  }
  return det;
}

/// Variables statement i reads: the rhs of a definition, everything in a constraint.
inline std::set<VarName> used_vars(const SymbolicProblem& p, std::size_t i) {
  if (p.is_definition(i)) {
    std::set<VarName> vars;
    collect_vars(p.statements[i].rhs, vars);
    return vars;
  }
  return statement_vars(p.statements[i]);
}

inline DependencyGraph build_dependency_graph(const SymbolicProblem& p) {
  DependencyGraph g;
  g.node_count = p.statements.size();
  auto det = determiners(p);
  for (std::size_t j = 0; j < p.statements.size(); ++j) {
    for (VarName v : used_vars(p, j)) {
      auto it = det.find(v);
      if (it == det.end())
        throw SolveError(SolveErrorKind::unbound_variable, std::string("variable '") + v +
                                                               "' is never determined");
      for (std::size_t i : it->second)
        if (i != j) g.edges.emplace(i, j);
    }
  }

  std::vector<std::size_t> stack;
  for (VarName t : p.question.targets) {
    auto it = det.find(t);
    if (it == det.end())
      throw SolveError(SolveErrorKind::unbound_variable, std::string("question target '") + t +
                                                             "' is never determined");
    for (std::size_t i : it->second)
      if (g.question_roots.insert(i).second) stack.push_back(i);
  }
  while (!stack.empty()) {
    std::size_t j = stack.back();
    stack.pop_back();
    for (const auto& [from, to] : g.edges)
      if (to == j && g.question_roots.insert(from).second) stack.push_back(from);
  }
  return g;
}

}  // namespace mathcamps
