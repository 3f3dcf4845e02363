#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mathcamps/dsl/parser.hpp"
#include "mathcamps/grammar/standard.hpp"
#include "mathcamps/solver/solve.hpp"

namespace mathcamps {

enum class CycleVerdict { consistent, inconsistent, unparseable };

inline const char* to_string(CycleVerdict v) {
  switch (v) {
    case CycleVerdict::consistent: return "consistent";
    case CycleVerdict::inconsistent: return "inconsistent";
    case CycleVerdict::unparseable: return "unparseable";
  }
  return "inconsistent";
}

inline std::optional<CycleVerdict> cycle_verdict_from_string(std::string_view s) {
  for (auto v : {CycleVerdict::consistent, CycleVerdict::inconsistent, CycleVerdict::unparseable})
    if (s == to_string(v)) return v;
  return std::nullopt;
}

/// Compares the answer of `original` with the answer of whatever structure
/// `recovered_text` describes. A recovered structure that parses but cannot
/// be solved is inconsistent.
inline CycleVerdict cycle_check(const Answer& original_answer, const std::string& recovered_text, QuestionKind kind) {
  SymbolicProblem recovered;
  try {
    recovered = parse_problem(recovered_text);
  } catch (const ParseError&) {
    return CycleVerdict::unparseable;
  }
  try {
    return answers_equal(original_answer, classify_and_solve(recovered, kind)) ? CycleVerdict::consistent
                                                                               : CycleVerdict::inconsistent;
  } catch (const SolveError&) {
    return CycleVerdict::inconsistent;
  }
}

inline CycleVerdict cycle_check(const SymbolicProblem& original, const std::string& recovered_text,
                                const StandardSpec& spec) {
  return cycle_check(classify_and_solve(original, spec.question_kind), recovered_text, spec.question_kind);
}

}  // namespace mathcamps
