#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mathcamps/dsl/rewrite.hpp"
#include "mathcamps/error.hpp"
#include "mathcamps/grammar/generate.hpp"
#include "mathcamps/grammar/rng.hpp"
#include "mathcamps/grammar/standard.hpp"
#include "mathcamps/solver/solve.hpp"

namespace mathcamps {

struct CounterfactualChange {
  ConstantPath path;
  ExactNumber old_value;
  ExactNumber new_value;
};

struct IncrementalExtension {
  std::vector<Statement> appended;
  Question question;
};

using ProblemDiff = std::variant<CounterfactualChange, IncrementalExtension>;

inline FollowupKind diff_kind(const ProblemDiff& d) {
  return std::holds_alternative<CounterfactualChange>(d) ? FollowupKind::counterfactual : FollowupKind::incremental;
}

/// Structural rewrite; `p` is left untouched. Throws PathInvalidError for a
/// path that does not end at a constant, or an extension that refers to
/// variables it neither finds nor defines.
inline SymbolicProblem apply_diff(const SymbolicProblem& p, const ProblemDiff& diff) {
  if (auto* cf = std::get_if<CounterfactualChange>(&diff)) return replace_constant(p, cf->path, cf->new_value);
  const auto& inc = std::get<IncrementalExtension>(diff);
  SymbolicProblem out = p;
  auto known = p.all_vars();
  for (const auto& s : inc.appended) {
    out.statements.push_back(s);
    auto d = out.defined_var(out.statements.size() - 1);
    for (VarName v : statement_vars(s))
      if (!known.count(v) && (!d || v != *d)) throw PathInvalidError(std::string("unbound variable in extension: ") + v);
    if (d) known.insert(*d);
  }
  for (VarName t : inc.question.targets)
    if (!known.count(t)) throw PathInvalidError(std::string("question targets unknown variable: ") + t);
  out.question = inc.question;
  return out;
}

/// Counterfactual with old and new values swapped.
inline CounterfactualChange invert(const CounterfactualChange& cf) { return {cf.path, cf.new_value, cf.old_value}; }

/// Acceptance test for a follow-up problem: solvable, inside the standard's
/// bounds, and passing its filters. Statement-count limits are not applied
/// since an extension lengthens the problem by design.
inline std::variant<Answer, std::string> validate_followup(const StandardSpec& spec, const SymbolicProblem& p) {
  Answer ans;
  try {
    ans = classify_and_solve(p, spec.question_kind);
  } catch (const SolveError& e) {
    return std::string("Solve:") + to_string(e.kind());
  }
  if (auto why = check_spec_bounds(spec, p, ans); !why.empty()) return why;
  for (const auto& f : spec.filters) {
    if (f.name == FilterName::problem_length) continue;
    auto verdict = run_filter(f, p, ans);
    if (!verdict.pass) return verdict.reason;
  }
  return ans;
}

namespace detail {

inline constexpr int kValueTries = 24;
inline constexpr int kExtensionTries = 200;

// A replacement of the same written form as `old`, inside the constant bounds.
inline ExactNumber replacement_value(const StandardSpec& spec, const ExactNumber& old, Rng& rng) {
  const long lo = spec.min_number, hi = spec.max_number;
  switch (old.form()) {
    case NumberForm::integer: return ExactNumber(static_cast<long>(rng.uniform(lo, hi)));
    case NumberForm::decimal: {
      long scale = 1;
      for (int i = 0; i < spec.decimal_places; ++i) scale *= 10;
      return ExactNumber(mpq_class(rng.uniform(lo * scale, hi * scale), scale), NumberForm::decimal);
    }
    case NumberForm::fraction: {
      long den = old.denominator().fits_slong_p() ? old.denominator().get_si() : spec.max_denominator;
      return ExactNumber(mpq_class(rng.uniform(lo * den, hi * den), den), NumberForm::fraction);
    }
  }
  return old;
}

inline ExactNumber extension_constant(const StandardSpec& spec, Rng& rng) {
  NumberDomain d = spec.number_domain;
  if (d == NumberDomain::mixed) {
    static const NumberDomain parts[] = {NumberDomain::whole, NumberDomain::fraction, NumberDomain::decimal};
    d = parts[rng.uniform(0, 2)];
  }
  ExactNumber form_of = d == NumberDomain::decimal    ? ExactNumber(mpq_class(1, 10), NumberForm::decimal)
                        : d == NumberDomain::fraction && rng.chance(2.0 / 3)
                            ? ExactNumber(mpq_class(1, rng.uniform(2, spec.max_denominator)), NumberForm::fraction)
                            : ExactNumber(1L);
  return replacement_value(spec, form_of, rng);
}

inline ProblemDiff propose_counterfactual(const StandardSpec& spec, const SymbolicProblem& p, Rng& rng) {
  const Answer original = classify_and_solve(p, spec.question_kind);
  auto constants = enumerate_constants(p);
  rng.shuffle(constants);
  const mpq_class lo(spec.min_number), hi(spec.max_number);
  for (const auto& [path, old] : constants) {
    for (int i = 0; i < kValueTries; ++i) {
      ExactNumber v = replacement_value(spec, old, rng);
      if (same_value(v, old) || v.value() < lo || v.value() > hi) continue;
      CounterfactualChange cf{path, old, v};
      auto result = validate_followup(spec, apply_diff(p, cf));
      auto* ans = std::get_if<Answer>(&result);
      if (ans && !answers_equal(*ans, original)) return cf;
    }
  }
  throw ExhaustedError(constants.size() * kValueTries, "no answer-relevant constant in " + spec.id);
}

inline ProblemDiff propose_incremental(const StandardSpec& spec, const SymbolicProblem& p, Rng& rng) {
  if (p.question.targets.size() != 1 || spec.question_kind != QuestionKind::value)
    throw NotApplicableError("incremental follow-ups need a single-value question");
  const VarName target = p.question.targets.front();
  const ExactNumber target_val = target_value(solve_values(p), target);

  std::vector<BinaryOp> ops;
  for (auto op : {BinaryOp::add, BinaryOp::sub, BinaryOp::mul, BinaryOp::div})
    if (spec.allows(*expr_op_of(op))) ops.push_back(op);
  if (ops.empty()) throw NotApplicableError("standard " + spec.id + " has no binary operator to extend with");

  std::vector<VarName> free;
  auto used = p.all_vars();
  for (char c = 'a'; c <= 'z'; ++c)
    if (c != p.question.target_alias && !used.count(c)) free.push_back(c);
  if (free.empty()) throw NotApplicableError("no free variable name");

  auto operand = [&](BinaryOp op, const ExactNumber& left) {
    if (op == BinaryOp::div && spec.number_domain == NumberDomain::whole && left.is_integer() && !left.is_zero()) {
      std::vector<long> divs;
      mpz_class n = abs(left.numerator());
      for (long d = std::max(2L, spec.operand_range.first); d <= spec.operand_range.second && d <= 1000; ++d)
        if (n % d == 0) divs.push_back(d);
      if (!divs.empty()) return ExactNumber(rng.pick(divs));
    }
    return extension_constant(spec, rng);
  };

  for (int i = 0; i < kExtensionTries; ++i) {
    BinaryOp op = rng.pick(ops);
    ExprPtr rhs = make_binop(op, make_var(target), make_const(operand(op, target_val)));
    if (rng.chance(0.3)) {
      ExactNumber partial;
      try {
        partial = apply_binary(op, target_val, std::get<Const>(std::get<BinOp>(rhs->node).right->node).value);
      } catch (const SolveError&) {
        continue;
      }
      BinaryOp op2 = rng.pick(ops);
      rhs = make_binop(op2, rhs, make_const(operand(op2, partial)));
    }
    VarName fresh = rng.pick(free);
    IncrementalExtension inc{{Statement{make_var(fresh), rhs}}, Question{p.question.target_alias, {fresh}}};
    auto result = validate_followup(spec, apply_diff(p, inc));
    if (std::holds_alternative<Answer>(result)) return inc;
  }
  throw ExhaustedError(kExtensionTries, "no valid incremental extension for " + spec.id);
}

}  // namespace detail

/// Deterministic in (spec, p, kind, seed). Throws NotApplicableError when the
/// standard does not use `kind`, ExhaustedError when nothing suitable exists.
inline ProblemDiff propose_diff(const StandardSpec& spec, const SymbolicProblem& p, FollowupKind kind,
                                std::uint64_t seed) {
  if (!spec.followups.count(kind))
    throw NotApplicableError(std::string(to_string(kind)) + " follow-ups are not enabled for " + spec.id);
  Rng rng(mix_seed(seed, to_string(kind)));
  return kind == FollowupKind::counterfactual ? detail::propose_counterfactual(spec, p, rng)
                                              : detail::propose_incremental(spec, p, rng);
}

}  // namespace mathcamps
