#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "mathcamps/constraints/filters.hpp"
#include "mathcamps/constraints/transforms.hpp"
#include "mathcamps/error.hpp"
#include "mathcamps/grammar/rng.hpp"
#include "mathcamps/grammar/sampler.hpp"
#include "mathcamps/grammar/standard.hpp"
#include "mathcamps/solver/solve.hpp"

namespace mathcamps {

/// Rejection counts keyed by reason ("Solve:DivisionByZero",
/// "CheckIntermediateValues:above_max", ...).
struct GenerationStats {
  std::size_t attempts = 0;
  std::size_t accepted = 0;
  std::map<std::string, std::size_t> rejections;

  void merge(const GenerationStats& o) {
    attempts += o.attempts;
    accepted += o.accepted;
    for (auto& [k, v] : o.rejections) rejections[k] += v;
  }
};

struct ValidProblem {
  SymbolicProblem problem;
  Answer answer;
  std::size_t attempts = 0;  // 1-based index of the accepted attempt
};

inline std::uint64_t attempt_seed(std::uint64_t seed, const std::string& standard_id, std::uint64_t attempt) {
  return mix_seed(mix_seed(seed, standard_id), attempt);
}

namespace detail {

// Reason code without the ":detail" tail, for aggregation.
inline std::string reason_key(const std::string& reason) {
  auto first = reason.find(':');
  if (first == std::string::npos) return reason;
  auto second = reason.find(':', first + 1);
  return second == std::string::npos ? reason : reason.substr(0, second);
}

}  // namespace detail

/// Attribute checks shared by every standard: operators and constants stay
/// within the spec, and intermediate values belong to the number domain.
/// Returns an empty string on success, otherwise a rejection reason.
inline std::string check_spec_bounds(const StandardSpec& spec, const SymbolicProblem& p, const Answer& ans) {
  auto use = operators_used(p);
  for (auto op : use.binary)
    if (!spec.allows(*expr_op_of(op))) return std::string("Bounds:operator:") + op_symbol(op);
  for (int d : use.root_degrees)
    if (!spec.allows(d == 2 ? ExprOp::root2 : ExprOp::root3)) return "Bounds:operator:root" + std::to_string(d);
  const mpq_class lo(spec.min_number), hi(spec.max_number);
  for (const auto& [path, v] : enumerate_constants(p))
    if (v.value() < lo || v.value() > hi) return "Bounds:constant:" + v.to_string();
  if (spec.number_domain == NumberDomain::whole || spec.number_domain == NumberDomain::decimal) {
    for (const auto& v : intermediate_values(p, ans)) {
      if (spec.number_domain == NumberDomain::whole && !v.is_integer()) return "NumberDomain:not_whole:" + v.to_string();
      if (spec.number_domain == NumberDomain::decimal && !v.has_finite_decimal())
        return "NumberDomain:not_decimal:" + v.to_string();
    }
  }
  return {};
}

/// Full acceptance test for a candidate: solvable, within spec bounds, and
/// passing every configured filter. Returns the answer or a reason.
inline std::variant<Answer, std::string> validate_candidate(const StandardSpec& spec, const SymbolicProblem& p) {
  Answer ans;
  try {
    ans = classify_and_solve(p, spec.question_kind);
  } catch (const SolveError& e) {
    return std::string("Solve:") + to_string(e.kind());
  }
  if (auto why = check_spec_bounds(spec, p, ans); !why.empty()) return why;
  for (const auto& f : spec.filters) {
    auto verdict = run_filter(f, p, ans);
    if (!verdict.pass) return verdict.reason;
  }
  return ans;
}

/// Rejection sampling: draw with per-attempt sub-seeds, transform, solve,
/// filter. Throws ExhaustedError after `max_attempts` rejections.
inline ValidProblem generate_valid(const StandardSpec& spec, std::uint64_t seed, std::size_t max_attempts,
                                   GenerationStats* stats = nullptr) {
  if (max_attempts < 1) throw std::invalid_argument("generate_valid: max_attempts must be >= 1");
  GenerationStats local;
  auto reject = [&](const std::string& reason) { ++local.rejections[detail::reason_key(reason)]; };
  for (std::size_t i = 0; i < max_attempts; ++i) {
    ++local.attempts;
    SymbolicProblem p = sample_symbolic(spec, attempt_seed(seed, spec.id, i));
    try {
      for (auto t : spec.transforms) p = apply_transform(t, p);
    } catch (const SolveError& e) {
      reject(std::string("Transform:") + to_string(e.kind()));
      continue;
    }
    auto result = validate_candidate(spec, p);
    if (auto* why = std::get_if<std::string>(&result)) {
      reject(*why);
      continue;
    }
    ++local.accepted;
    if (stats) stats->merge(local);
    return ValidProblem{std::move(p), std::get<Answer>(std::move(result)), i + 1};
  }
  if (stats) stats->merge(local);
  throw ExhaustedError(max_attempts, "no valid problem for " + spec.id);
}

}  // namespace mathcamps
