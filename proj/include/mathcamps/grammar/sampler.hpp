#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "mathcamps/dsl/ast.hpp"
#include "mathcamps/grammar/rng.hpp"
#include "mathcamps/grammar/standard.hpp"
#include "mathcamps/solver/evaluate.hpp"

namespace mathcamps {

namespace detail {

/// Expansion state for one sampled problem. Values are carried as attributes
/// so productions can steer divisions and roots towards exact results.
class Sampler {
 public:
  Sampler(const StandardSpec& spec, std::uint64_t seed) : spec_(spec), rng_(seed) {}

  SymbolicProblem run() {
    switch (spec_.problem) {
      case ProblemShape::statements: return statements();
      case ProblemShape::equation: return equation();
      case ProblemShape::system: return system();
      case ProblemShape::comparison: return comparison();
      case ProblemShape::factors: return factors();
      case ProblemShape::perimeter: return perimeter();
      case ProblemShape::rectangle: return rectangle();
      case ProblemShape::exact_division: return exact_division();
      case ProblemShape::division_remainder: return division_remainder();
      case ProblemShape::multistep_remainder: return multistep_remainder();
    }
    return statements();
  }

 private:
  struct Node {
    ExprPtr expr;
    std::optional<ExactNumber> value;  // empty once evaluation failed
  };

  const StandardSpec& spec_;
  Rng rng_;
  std::set<VarName> used_;
  Environment env_;
  std::vector<VarName> defined_;

  static constexpr VarName kAlias = 'h';

  VarName fresh_var() {
    std::vector<VarName> free;
    for (char c = 'a'; c <= 'z'; ++c)
      if (c != kAlias && !used_.count(c)) free.push_back(c);
    VarName v = rng_.pick(free);
    used_.insert(v);
    return v;
  }

  Question question(std::vector<VarName> targets) const { return Question{kAlias, std::move(targets)}; }

  std::vector<BinaryOp> binary_ops(bool linear_only = false) const {
    std::vector<BinaryOp> out;
    for (auto op : {BinaryOp::add, BinaryOp::sub, BinaryOp::mul, BinaryOp::div, BinaryOp::pow}) {
      if (linear_only && op == BinaryOp::pow) continue;
      if (spec_.allows(*expr_op_of(op))) out.push_back(op);
    }
    return out;
  }

  ExactNumber integer(long lo, long hi) { return ExactNumber(static_cast<long>(rng_.uniform(lo, hi))); }

  ExactNumber sample_number(NumberDomain domain) {
    const long lo = spec_.min_number, hi = spec_.max_number;
    switch (domain) {
      case NumberDomain::whole: return integer(lo, hi);
      case NumberDomain::decimal: {
        long scale = 1;
        for (int i = 0; i < spec_.decimal_places; ++i) scale *= 10;
        auto k = rng_.uniform(lo * scale, hi * scale);
        return ExactNumber(mpq_class(k, scale), NumberForm::decimal);
      }
      case NumberDomain::fraction: {
        if (rng_.chance(1.0 / 3)) return integer(lo, hi);
        long den = rng_.uniform(2, spec_.max_denominator);
        auto num = rng_.uniform(lo * den, hi * den);
        return ExactNumber(mpq_class(num, den), NumberForm::fraction);
      }
      case NumberDomain::mixed: {
        static const NumberDomain parts[] = {NumberDomain::whole, NumberDomain::fraction, NumberDomain::decimal};
        return sample_number(parts[rng_.uniform(0, 2)]);
      }
    }
    return integer(lo, hi);
  }

  ExactNumber sample_nonzero(NumberDomain domain) {
    for (int i = 0; i < 64; ++i) {
      auto v = sample_number(domain);
      if (!v.is_zero()) return v;
    }
    return ExactNumber(spec_.max_number != 0 ? spec_.max_number : 1);
  }

  Node constant(ExactNumber v) { return Node{make_const(v), v}; }

  Node leaf(bool allow_vars) {
    if (allow_vars && !defined_.empty() && rng_.chance(0.5)) {
      VarName v = rng_.pick(defined_);
      return Node{make_var(v), env_.at(v)};
    }
    return constant(sample_number(spec_.number_domain));
  }

  static std::optional<ExactNumber> combine(BinaryOp op, const Node& l, const Node& r) {
    if (!l.value || !r.value) return std::nullopt;
    try {
      return apply_binary(op, *l.value, *r.value);
    } catch (const SolveError&) {
      return std::nullopt;
    }
  }

  /// Whole-number divisors of |v| inside the operand range.
  std::vector<long> divisors_in_range(const ExactNumber& v) const {
    std::vector<long> out;
    if (!v.is_integer() || v.is_zero()) return out;
    mpz_class n = abs(v.numerator());
    long lo = std::max(2L, spec_.operand_range.first);
    long hi = spec_.operand_range.second;
    if (n.fits_slong_p() && n.get_si() < hi) hi = n.get_si();
    for (long d = lo; d <= hi && d <= 100000; ++d)
      if (n % d == 0) out.push_back(d);
    return out;
  }

  Node divisor_for(const Node& left) {
    if (spec_.number_domain == NumberDomain::whole) {
      if (left.value) {
        auto ds = divisors_in_range(*left.value);
        if (!ds.empty()) return constant(ExactNumber(rng_.pick(ds)));
      }
      long lo = std::max(1L, spec_.operand_range.first);
      return constant(integer(lo, std::max(lo, spec_.operand_range.second)));
    }
    return constant(sample_nonzero(spec_.number_domain));
  }

  std::optional<Node> root_node(int degree) {
    // Perfect powers r^degree inside the constant bounds.
    long lo = std::max(0L, spec_.min_number);
    long hi = spec_.max_number;
    std::vector<long> bases;
    for (long r = 0;; ++r) {
      long p = degree == 2 ? r * r : r * r * r;
      if (p > hi) break;
      if (p >= lo) bases.push_back(r);
    }
    if (bases.empty()) return std::nullopt;
    long r = rng_.pick(bases);
    long p = degree == 2 ? r * r : r * r * r;
    return Node{make_root(degree, make_const(p)), ExactNumber(r)};
  }

  std::optional<Node> power_node(int depth, bool allow_vars) {
    long lo = std::max(2L, spec_.min_number);
    long hi = std::min<long>(spec_.max_exponent, spec_.max_number);
    if (lo > hi) return std::nullopt;
    Node base = depth > 1 && rng_.chance(0.3) ? expr(depth - 1, allow_vars, false) : leaf(allow_vars);
    Node exponent = constant(integer(lo, hi));
    return Node{make_binop(BinaryOp::pow, base.expr, exponent.expr), combine(BinaryOp::pow, base, exponent)};
  }

 public:
  /// Expression of depth <= `depth`. `force_op` makes the root an operator
  /// whenever one is available.
  Node expr(int depth, bool allow_vars, bool force_op) {
    std::vector<ExprOp> ops(spec_.expression_ops.begin(), spec_.expression_ops.end());
    if (depth <= 0 || ops.empty() || !(force_op || rng_.chance(0.5))) return leaf(allow_vars);
    ExprOp op = rng_.pick(ops);
    switch (op) {
      case ExprOp::root2:
      case ExprOp::root3:
        if (auto n = root_node(op == ExprOp::root2 ? 2 : 3)) return *n;
        return leaf(allow_vars);
      case ExprOp::pow:
        if (auto n = power_node(depth, allow_vars)) return *n;
        return leaf(allow_vars);
      case ExprOp::div: {
        Node l = expr(depth - 1, allow_vars, false);
        Node r = depth > 1 && spec_.number_domain != NumberDomain::whole && rng_.chance(0.3)
                     ? expr(depth - 1, allow_vars, false)
                     : divisor_for(l);
        return Node{make_binop(BinaryOp::div, l.expr, r.expr), combine(BinaryOp::div, l, r)};
      }
      default: {
        BinaryOp b = op == ExprOp::add ? BinaryOp::add : op == ExprOp::sub ? BinaryOp::sub : BinaryOp::mul;
        Node l = expr(depth - 1, allow_vars, false);
        Node r = expr(depth - 1, allow_vars, false);
        return Node{make_binop(b, l.expr, r.expr), combine(b, l, r)};
      }
    }
  }

 private:
  VarName define(SymbolicProblem& p, const Node& n) {
    VarName v = fresh_var();
    p.statements.push_back(Statement{make_var(v), n.expr});
    if (n.value) env_[v] = *n.value;
    // A failed evaluation leaves the variable out of the pool; the solver
    // rejects the sample later.
    if (n.value) defined_.push_back(v);
    return v;
  }

  int statement_count() { return static_cast<int>(rng_.uniform(spec_.statement_count.first, spec_.statement_count.second)); }

  SymbolicProblem statements() {
    SymbolicProblem p;
    int n = statement_count();
    VarName last = 0;
    for (int i = 0; i < n; ++i) last = define(p, expr(spec_.max_depth, true, true));
    p.question = question({last});
    return p;
  }

  SymbolicProblem comparison() {
    SymbolicProblem p;
    VarName a = define(p, expr(spec_.max_depth, false, true));
    VarName b = define(p, expr(spec_.max_depth, false, true));
    p.question = question({a, b});
    return p;
  }

  SymbolicProblem factors() {
    SymbolicProblem p;
    VarName a = define(p, expr(spec_.max_depth, false, true));
    p.question = question({a});
    return p;
  }

  // One side of a linear equation around `unknown`.
  ExprPtr linear_side(VarName unknown) {
    auto ops = binary_ops(true);
    ExprPtr e = make_var(unknown);
    if (ops.empty()) return e;
    int steps = static_cast<int>(rng_.uniform(1, spec_.max_depth));
    for (int i = 0; i < steps; ++i) {
      BinaryOp op = rng_.pick(ops);
      ExprPtr c = make_const(op == BinaryOp::div || op == BinaryOp::mul ? sample_nonzero(spec_.number_domain)
                                                                          : sample_number(spec_.number_domain));
      if (op == BinaryOp::div || rng_.chance(0.5))
        e = make_binop(op, e, c);
      else
        e = make_binop(op, c, e);
    }
    return e;
  }

  SymbolicProblem equation() {
    SymbolicProblem p;
    int n = statement_count();
    // Optional leading definitions feed a constant into the equation.
    for (int i = 1; i < n; ++i) define(p, expr(std::max(1, spec_.max_depth - 1), true, true));
    VarName u = fresh_var();
    ExprPtr side = linear_side(u);
    ExprPtr k = !defined_.empty() && rng_.chance(0.5) ? make_var(rng_.pick(defined_))
                                                     : make_const(sample_number(spec_.number_domain));
    if (rng_.chance(0.5))
      p.statements.push_back(Statement{k, side});
    else
      p.statements.push_back(Statement{side, k});
    p.question = question({u});
    return p;
  }

  SymbolicProblem system() {
    SymbolicProblem p;
    VarName x = fresh_var();
    VarName y = fresh_var();
    auto coeff = [&] { return make_const(integer(spec_.operand_range.first, spec_.operand_range.second)); };
    bool sub_ok = spec_.allows(ExprOp::sub);
    for (int row = 0; row < 2; ++row) {
      ExprPtr tx = rng_.chance(0.3) ? make_var(x) : make_binop(BinaryOp::mul, coeff(), make_var(x));
      ExprPtr ty = rng_.chance(0.3) ? make_var(y) : make_binop(BinaryOp::mul, coeff(), make_var(y));
      BinaryOp op = sub_ok && rng_.chance(0.5) ? BinaryOp::sub : BinaryOp::add;
      ExprPtr lhs = make_binop(op, tx, ty);
      // Whole right-hand sides; the solution may still be fractional.
      p.statements.push_back(Statement{lhs, make_const(integer(spec_.min_number, spec_.max_number))});
    }
    p.question = question({x, y});
    return p;
  }

  SymbolicProblem perimeter() {
    SymbolicProblem p;
    int n = static_cast<int>(rng_.uniform(spec_.sides.first, spec_.sides.second));
    std::vector<ExactNumber> sides;
    for (int i = 0; i < n; ++i) sides.push_back(integer(spec_.operand_range.first, spec_.operand_range.second));
    bool missing = rng_.chance(0.5);
    int hole = static_cast<int>(rng_.uniform(0, n - 1));
    VarName x = missing ? fresh_var() : 0;
    ExprPtr sum;
    ExactNumber total(0);
    for (int i = 0; i < n; ++i) {
      ExprPtr term = missing && i == hole ? make_var(x) : make_const(sides[i]);
      total = total + sides[i];
      sum = sum ? make_binop(BinaryOp::add, sum, term) : term;
    }
    if (missing) {
      p.statements.push_back(Statement{make_const(total), sum});
      p.question = question({x});
    } else {
      VarName v = define(p, Node{sum, total});
      p.question = question({v});
    }
    return p;
  }

  SymbolicProblem rectangle() {
    SymbolicProblem p;
    auto l = integer(spec_.operand_range.first, spec_.operand_range.second);
    auto w = integer(spec_.operand_range.first, spec_.operand_range.second);
    bool area = rng_.chance(0.5);
    bool missing = rng_.chance(0.5);
    VarName x = missing ? fresh_var() : 0;
    ExprPtr lx = missing ? make_var(x) : make_const(l);
    ExprPtr body = area ? make_binop(BinaryOp::mul, lx, make_const(w))
                        : make_binop(BinaryOp::add, make_binop(BinaryOp::mul, make_const(2), lx),
                                     make_binop(BinaryOp::mul, make_const(2), make_const(w)));
    ExactNumber total = area ? l * w : ExactNumber(2) * l + ExactNumber(2) * w;
    if (missing) {
      p.statements.push_back(Statement{make_const(total), body});
      p.question = question({x});
    } else {
      VarName v = define(p, Node{body, total});
      p.question = question({v});
    }
    return p;
  }

  SymbolicProblem exact_division() {
    SymbolicProblem p;
    long d = rng_.uniform(spec_.operand_range.first, spec_.operand_range.second);
    long qlo = std::max(1L, (spec_.min_number + d - 1) / d);
    long qhi = std::max(qlo, spec_.max_number / d);
    long q = rng_.uniform(qlo, qhi);
    Node l = constant(ExactNumber(q * d));
    Node r = constant(ExactNumber(d));
    VarName v = define(p, Node{make_binop(BinaryOp::div, l.expr, r.expr), ExactNumber(q)});
    p.question = question({v});
    return p;
  }

  SymbolicProblem division_remainder() {
    SymbolicProblem p;
    Node l = constant(integer(spec_.min_number, spec_.max_number));
    Node r = constant(integer(spec_.operand_range.first, spec_.operand_range.second));
    VarName v = define(p, Node{make_binop(BinaryOp::div, l.expr, r.expr), combine(BinaryOp::div, l, r)});
    p.question = question({v});
    return p;
  }

  SymbolicProblem multistep_remainder() {
    SymbolicProblem p;
    int n = statement_count();
    for (int i = 1; i < n; ++i) define(p, expr(spec_.max_depth, true, true));
    Node l = !defined_.empty() ? Node{make_var(defined_.back()), env_.at(defined_.back())}
                               : expr(std::max(1, spec_.max_depth - 1), false, true);
    Node r = constant(integer(spec_.operand_range.first, spec_.operand_range.second));
    VarName v = define(p, Node{make_binop(BinaryOp::div, l.expr, r.expr), combine(BinaryOp::div, l, r)});
    p.question = question({v});
    return p;
  }
};

}  // namespace detail

/// One raw draw from the standard's grammar. Total and deterministic in
/// (spec, seed); the result may still fail filters or be unsolvable.
inline SymbolicProblem sample_symbolic(const StandardSpec& spec, std::uint64_t seed) {
  return detail::Sampler(spec, seed).run();
}

}  // namespace mathcamps
