#pragma once

#include <map>
#include <vector>

#include "mathcamps/dsl/ast.hpp"
#include "mathcamps/error.hpp"
#include "mathcamps/solver/evaluate.hpp"

namespace mathcamps {

/// Dense system `coefficients * variables = constants` over the rationals.
struct LinearSystem {
  std::vector<VarName> variables;
  std::vector<std::vector<mpq_class>> coefficients;  // one row per equation
  std::vector<mpq_class> constants;
};

/// Solves a system with a unique solution by fraction-preserving Gaussian
/// elimination, pivoting on the first nonzero entry of each column. Extra
/// rows are allowed as long as they are consistent.
inline std::map<VarName, ExactNumber> gauss_solve(const LinearSystem& s) {
  const std::size_t n = s.variables.size();
  const std::size_t m = s.coefficients.size();
  std::vector<std::vector<mpq_class>> a(m, std::vector<mpq_class>(n + 1));
  for (std::size_t i = 0; i < m; ++i) {
    if (s.coefficients[i].size() != n)
      throw SolveError(SolveErrorKind::bad_question, "row width differs from variable count");
    for (std::size_t j = 0; j < n; ++j) a[i][j] = s.coefficients[i][j];
    a[i][n] = s.constants.at(i);
  }

  std::size_t rank = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t pivot = rank;
    while (pivot < m && sgn(a[pivot][col]) == 0) ++pivot;
    if (pivot == m) continue;
    std::swap(a[rank], a[pivot]);
    mpq_class inv = 1 / a[rank][col];
    for (std::size_t k = col; k <= n; ++k) a[rank][k] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == rank || sgn(a[i][col]) == 0) continue;
      mpq_class factor = a[i][col];
      for (std::size_t k = col; k <= n; ++k) a[i][k] -= factor * a[rank][k];
    }
    pivot_col.push_back(col);
    ++rank;
  }

  for (std::size_t i = rank; i < m; ++i)
    if (sgn(a[i][n]) != 0) throw SolveError(SolveErrorKind::inconsistent, "system has no solution");
  if (rank < n)
    throw SolveError(SolveErrorKind::underdetermined,
                     std::to_string(rank) + " independent equations for " + std::to_string(n) + " unknowns");

  std::map<VarName, ExactNumber> out;
  for (std::size_t r = 0; r < rank; ++r)
    out.emplace(s.variables[pivot_col[r]], ExactNumber(a[r][n]));
  return out;
}

/// `constant + sum(coeff * unknown)`.
struct AffineForm {
  ExactNumber constant;
  std::map<VarName, mpq_class> coeffs;

  bool is_constant() const { return coeffs.empty(); }
};

namespace detail {

inline AffineForm affine_scale(const AffineForm& f, const ExactNumber& k) {
  AffineForm out{f.constant * k, {}};
  if (!k.is_zero())
    for (const auto& [v, c] : f.coeffs) out.coeffs[v] = c * k.value();
  return out;
}

inline AffineForm affine_add(const AffineForm& a, const AffineForm& b, int sign) {
  AffineForm out{sign > 0 ? a.constant + b.constant : a.constant - b.constant, a.coeffs};
  for (const auto& [v, c] : b.coeffs) {
    mpq_class sum = out.coeffs[v] + (sign > 0 ? c : mpq_class(-c));
    if (sgn(sum) == 0)
      out.coeffs.erase(v);
    else
      out.coeffs[v] = sum;
  }
  return out;
}

}  // namespace detail

/// Expresses `e` as an affine form over the unknowns. `forms` maps every
/// already-defined variable to its form; unbound names are unknowns.
inline AffineForm to_affine(const ExprPtr& e, const std::map<VarName, AffineForm>& forms) {
  return std::visit(
      [&](const auto& n) -> AffineForm {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Const>) {
          return AffineForm{n.value, {}};
        } else if constexpr (std::is_same_v<T, VarRef>) {
          if (auto it = forms.find(n.name); it != forms.end()) return it->second;
          return AffineForm{ExactNumber(0), {{n.name, mpq_class(1)}}};
        } else if constexpr (std::is_same_v<T, Root>) {
          auto inner = to_affine(n.radicand, forms);
          if (!inner.is_constant()) throw SolveError(SolveErrorKind::non_linear, "root of an unknown");
          return AffineForm{exact_root(inner.constant, n.degree), {}};
        } else {
          auto l = to_affine(n.left, forms);
          auto r = to_affine(n.right, forms);
          switch (n.op) {
            case BinaryOp::add: return detail::affine_add(l, r, +1);
            case BinaryOp::sub: return detail::affine_add(l, r, -1);
            case BinaryOp::mul:
              if (l.is_constant()) return detail::affine_scale(r, l.constant);
              if (r.is_constant()) return detail::affine_scale(l, r.constant);
              throw SolveError(SolveErrorKind::non_linear, "product of two unknown quantities");
            case BinaryOp::div:
              if (!r.is_constant()) throw SolveError(SolveErrorKind::non_linear, "division by an unknown");
              if (r.constant.is_zero()) throw SolveError(SolveErrorKind::division_by_zero, "division by zero");
              return detail::affine_scale(l, ExactNumber(1) / r.constant);
            case BinaryOp::pow:
              if (l.is_constant()) return AffineForm{exact_pow(l.constant, r.constant), {}};
              if (r.constant.is_zero()) return AffineForm{ExactNumber(1), {}};
              if (r.constant.value() == 1) return l;
              throw SolveError(SolveErrorKind::non_linear, "power of an unknown");
          }
          return l;
        }
      },
      e->node);
}

/// Affine view of a whole problem: forms for every defined variable plus the
/// constraint rows over the unknowns.
struct AffineProblem {
  std::map<VarName, AffineForm> forms;
  LinearSystem system;
};

inline AffineProblem extract_affine(const SymbolicProblem& p) {
  AffineProblem out;
  std::vector<AffineForm> rows;
  for (std::size_t i = 0; i < p.statements.size(); ++i) {
    const auto& s = p.statements[i];
    if (auto v = p.defined_var(i)) {
      out.forms[*v] = to_affine(s.rhs, out.forms);
    } else {
      rows.push_back(detail::affine_add(to_affine(s.lhs, out.forms), to_affine(s.rhs, out.forms), -1));
    }
  }
  auto unknowns = p.unknowns();
  out.system.variables.assign(unknowns.begin(), unknowns.end());
  for (const auto& row : rows) {
    std::vector<mpq_class> coeffs;
    for (VarName v : out.system.variables) {
      auto it = row.coeffs.find(v);
      coeffs.push_back(it == row.coeffs.end() ? mpq_class(0) : it->second);
    }
    out.system.coefficients.push_back(std::move(coeffs));
    out.system.constants.push_back(-row.constant.value());
  }
  return out;
}

/// The constraint equations of `p` as a linear system over its unknowns.
inline LinearSystem extract_linear_system(const SymbolicProblem& p) { return extract_affine(p).system; }

}  // namespace mathcamps
