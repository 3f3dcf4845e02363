#pragma once

#include <map>
#include <optional>

#include "mathcamps/dsl/ast.hpp"
#include "mathcamps/error.hpp"

namespace mathcamps {

using Environment = std::map<VarName, ExactNumber>;

/// Largest exponent the evaluator accepts.
inline constexpr unsigned long kMaxExponent = 1000;

/// Exact integer k-th root of a nonnegative integer, if it exists.
inline std::optional<mpz_class> exact_integer_root(const mpz_class& n, unsigned long degree) {
  if (sgn(n) < 0) return std::nullopt;
  mpz_class r;
  if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), degree) == 0) return std::nullopt;
  return r;
}

/// Root of a nonnegative rational whose numerator and denominator are both
/// perfect powers of the degree.
inline ExactNumber exact_root(const ExactNumber& x, int degree) {
  if (x.is_negative())
    throw SolveError(SolveErrorKind::non_perfect_root, "root of negative value " + x.to_string());
  auto num = exact_integer_root(x.numerator(), static_cast<unsigned long>(degree));
  auto den = exact_integer_root(x.denominator(), static_cast<unsigned long>(degree));
  if (!num || !den)
    throw SolveError(SolveErrorKind::non_perfect_root, x.to_string() + " is not a perfect " +
                                                           (degree == 2 ? "square" : "cube"));
  return ExactNumber(mpq_class(*num, *den), x.form());
}

inline ExactNumber exact_pow(const ExactNumber& base, const ExactNumber& exponent) {
  if (!exponent.is_integer() || exponent.is_negative())
    throw SolveError(SolveErrorKind::non_linear, "exponent must be a whole number");
  if (exponent.numerator() > kMaxExponent)
    throw SolveError(SolveErrorKind::exponent_too_large, "exponent " + exponent.to_string());
  unsigned long e = exponent.numerator().get_ui();
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.numerator().get_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.denominator().get_mpz_t(), e);
  return ExactNumber(mpq_class(num, den), base.form());
}

inline ExactNumber apply_binary(BinaryOp op, const ExactNumber& l, const ExactNumber& r) {
  switch (op) {
    case BinaryOp::add: return l + r;
    case BinaryOp::sub: return l - r;
    case BinaryOp::mul: return l * r;
    case BinaryOp::div:
      if (r.is_zero()) throw SolveError(SolveErrorKind::division_by_zero, "division by zero");
      return l / r;
    case BinaryOp::pow: return exact_pow(l, r);
  }
  return l;
}

/// Exact evaluation with every variable bound in `env`.
inline ExactNumber evaluate_expr(const ExprPtr& e, const Environment& env) {
  return std::visit(
      [&](const auto& n) -> ExactNumber {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Const>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, VarRef>) {
          auto it = env.find(n.name);
          if (it == env.end())
            throw SolveError(SolveErrorKind::unbound_variable, std::string("variable '") + n.name + "'");
          return it->second;
        } else if constexpr (std::is_same_v<T, BinOp>) {
          return apply_binary(n.op, evaluate_expr(n.left, env), evaluate_expr(n.right, env));
        } else {
          return exact_root(evaluate_expr(n.radicand, env), n.degree);
        }
      },
      e->node);
}

}  // namespace mathcamps
