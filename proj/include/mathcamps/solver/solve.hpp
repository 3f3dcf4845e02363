#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mathcamps/dsl/ast.hpp"
#include "mathcamps/error.hpp"
#include "mathcamps/solver/answer.hpp"
#include "mathcamps/solver/evaluate.hpp"
#include "mathcamps/solver/linear.hpp"

namespace mathcamps {

/// All divisors of n (1 <= n <= 100), ascending.
inline FactorListAnswer factor_pairs(std::int64_t n) {
  if (n < 1 || n > 100)
    throw SolveError(SolveErrorKind::out_of_range, "factor_pairs expects 1..100, got " + std::to_string(n));
  FactorListAnswer out;
  std::vector<std::int64_t> high;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    out.factors.push_back(d);
    if (d != n / d) high.push_back(n / d);
  }
  out.factors.insert(out.factors.end(), high.rbegin(), high.rend());
  return out;
}

/// Exact comparison by cross-multiplication.
inline ComparisonAnswer compare_values(const ExactNumber& a, const ExactNumber& b) {
  mpz_class lhs = a.numerator() * b.denominator();
  mpz_class rhs = b.numerator() * a.denominator();
  if (lhs < rhs) return {ComparisonSymbol::less};
  if (lhs > rhs) return {ComparisonSymbol::greater};
  return {ComparisonSymbol::equal};
}

/// Value of every variable in a solvable problem.
inline Environment solve_values(const SymbolicProblem& p) {
  auto affine = extract_affine(p);
  Environment env;
  if (!affine.system.variables.empty() || !affine.system.coefficients.empty()) {
    bool decimal_constants = false;
    for (const auto& [path, value] : enumerate_constants(p))
      if (value.form() == NumberForm::decimal) decimal_constants = true;
    for (auto& [name, value] : gauss_solve(affine.system))
      env.emplace(name, decimal_constants ? value.with_form(NumberForm::decimal) : value);
  }
  for (std::size_t i = 0; i < p.statements.size(); ++i)
    if (auto v = p.defined_var(i)) env[*v] = evaluate_expr(p.statements[i].rhs, env);
  return env;
}

namespace detail {

// Top-level division defining `target`, if any.
inline const BinOp* defining_division(const SymbolicProblem& p, VarName target) {
  for (std::size_t i = 0; i < p.statements.size(); ++i) {
    if (p.defined_var(i) != target) continue;
    auto* op = std::get_if<BinOp>(&p.statements[i].rhs->node);
    return op && op->op == BinaryOp::div ? op : nullptr;
  }
  return nullptr;
}

inline ExactNumber target_value(const Environment& env, VarName t) {
  auto it = env.find(t);
  if (it == env.end())
    throw SolveError(SolveErrorKind::unbound_variable, std::string("question target '") + t + "'");
  return it->second;
}

}  // namespace detail

/// Answers `p` as a question of the given kind.
///
/// Value questions are solved by substitution when every statement is a
/// definition and through the linear system otherwise. Quotient-remainder
/// questions whose target is defined by a whole-number division report
/// quotient and remainder; other targets fall back to a scalar.
inline Answer classify_and_solve(const SymbolicProblem& p, QuestionKind kind) {
  Environment env = solve_values(p);
  const auto& targets = p.question.targets;
  if (targets.empty()) throw SolveError(SolveErrorKind::bad_question, "question has no targets");

  switch (kind) {
    case QuestionKind::comparison: {
      if (targets.size() != 2)
        throw SolveError(SolveErrorKind::bad_question, "comparison needs exactly two targets");
      return compare_values(detail::target_value(env, targets[0]), detail::target_value(env, targets[1]));
    }
    case QuestionKind::factor_list: {
      if (targets.size() != 1) throw SolveError(SolveErrorKind::bad_question, "factor question needs one target");
      auto v = detail::target_value(env, targets[0]);
      if (!v.is_integer())
        throw SolveError(SolveErrorKind::out_of_range, "factor target " + v.to_string() + " is not whole");
      if (v.numerator() < 1 || v.numerator() > 100)
        throw SolveError(SolveErrorKind::out_of_range, "factor target " + v.to_string());
      return factor_pairs(v.numerator().get_si());
    }
    case QuestionKind::quotient_remainder: {
      if (targets.size() == 1) {
        if (const BinOp* div = detail::defining_division(p, targets[0])) {
          auto dividend = evaluate_expr(div->left, env);
          auto divisor = evaluate_expr(div->right, env);
          if (dividend.is_integer() && divisor.is_integer() && !dividend.is_negative() &&
              sgn(divisor.numerator()) > 0) {
            mpz_class q, r;
            mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), dividend.numerator().get_mpz_t(),
                        divisor.numerator().get_mpz_t());
            return QuotientRemainderAnswer{q, r, divisor.numerator()};
          }
        }
      }
      [[fallthrough]];
    }
    case QuestionKind::value:
    case QuestionKind::multi_value: {
      if (targets.size() == 1 && kind != QuestionKind::multi_value)
        return ScalarAnswer{detail::target_value(env, targets[0])};
      AssignmentAnswer out;
      for (VarName t : targets) out.values.emplace_back(t, detail::target_value(env, t));
      return out;
    }
  }
  throw SolveError(SolveErrorKind::bad_question, "unknown question kind");
}

/// Values a solver passes through: every variable, every operator node under
/// the solution, and the final answer. For a quotient-remainder answer the
/// defining division is replaced by its quotient and remainder.
inline std::vector<ExactNumber> intermediate_values(const SymbolicProblem& p, const Answer& answer) {
  Environment env = solve_values(p);
  std::vector<ExactNumber> out;
  for (const auto& [name, value] : env) out.push_back(value);

  const Expr* skip = nullptr;
  if (auto* qr = std::get_if<QuotientRemainderAnswer>(&answer)) {
    out.emplace_back(mpq_class(qr->quotient), NumberForm::integer);
    out.emplace_back(mpq_class(qr->remainder), NumberForm::integer);
    for (std::size_t i = 0; i < p.statements.size(); ++i)
      if (p.defined_var(i) == p.question.targets.front()) {
        skip = p.statements[i].rhs.get();
        auto target = env.find(p.question.targets.front());
        if (target != env.end())
          out.erase(std::find_if(out.begin(), out.end(),
                                 [&](const ExactNumber& v) { return same_value(v, target->second); }));
      }
  }

  auto scan = [&](const ExprPtr& e) {
    visit_preorder(e, [&](const ExprPtr& n) {
      if ((n->is_binop() || n->is_root()) && n.get() != skip) out.push_back(evaluate_expr(n, env));
    });
  };
  for (const auto& s : p.statements) {
    scan(s.lhs);
    scan(s.rhs);
  }
  if (auto* s = std::get_if<ScalarAnswer>(&answer)) out.push_back(s->value);
  if (auto* m = std::get_if<AssignmentAnswer>(&answer))
    for (const auto& [name, value] : m->values) out.push_back(value);
  return out;
}

}  // namespace mathcamps
