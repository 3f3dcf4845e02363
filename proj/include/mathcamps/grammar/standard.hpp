#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mathcamps/constraints/filters.hpp"
#include "mathcamps/constraints/transforms.hpp"
#include "mathcamps/dsl/number.hpp"
#include "mathcamps/solver/answer.hpp"

namespace mathcamps {

/// Top-level production used to expand a standard.
enum class ProblemShape {
  statements,           // chain of definitions, question on the last
  equation,             // one linear equation in one unknown
  system,               // two linear equations in two unknowns
  comparison,           // two quantities, question compares them
  factors,              // one quantity, question lists its factors
  perimeter,            // polygon perimeter or missing side
  rectangle,            // rectangle area/perimeter or missing side
  exact_division,       // dividend chosen as a multiple of the divisor
  division_remainder,   // whole-number division with remainder
  multistep_remainder,  // statements ending in a division with remainder
};

enum class NumberDomain { whole, fraction, decimal, mixed };

enum class ExprOp { add, sub, mul, div, pow, root2, root3 };

enum class FollowupKind { incremental, counterfactual };

inline constexpr std::pair<ProblemShape, const char*> kShapeNames[] = {
    {ProblemShape::statements, "statements"},
    {ProblemShape::equation, "equation"},
    {ProblemShape::system, "system"},
    {ProblemShape::comparison, "comparison"},
    {ProblemShape::factors, "factors"},
    {ProblemShape::perimeter, "perimeter"},
    {ProblemShape::rectangle, "rectangle"},
    {ProblemShape::exact_division, "exact_division"},
    {ProblemShape::division_remainder, "division_remainder"},
    {ProblemShape::multistep_remainder, "multistep_remainder"},
};

inline const char* to_string(ProblemShape s) {
  for (auto& [k, name] : kShapeNames)
    if (k == s) return name;
  return "?";
}

inline std::optional<ProblemShape> shape_from_string(std::string_view s) {
  for (auto& [k, name] : kShapeNames)
    if (s == name) return k;
  return std::nullopt;
}

inline const char* to_string(NumberDomain d) {
  switch (d) {
    case NumberDomain::whole: return "whole";
    case NumberDomain::fraction: return "fraction";
    case NumberDomain::decimal: return "decimal";
    case NumberDomain::mixed: return "mixed";
  }
  return "?";
}

inline std::optional<NumberDomain> domain_from_string(std::string_view s) {
  for (auto d : {NumberDomain::whole, NumberDomain::fraction, NumberDomain::decimal, NumberDomain::mixed})
    if (s == to_string(d)) return d;
  return std::nullopt;
}

/// Config spelling: + - * / ^ root2 root3 (also × − ÷).
inline const char* to_string(ExprOp op) {
  switch (op) {
    case ExprOp::add: return "+";
    case ExprOp::sub: return "-";
    case ExprOp::mul: return "*";
    case ExprOp::div: return "/";
    case ExprOp::pow: return "^";
    case ExprOp::root2: return "root2";
    case ExprOp::root3: return "root3";
  }
  return "?";
}

inline std::optional<ExprOp> expr_op_from_string(std::string_view s) {
  if (s == "+") return ExprOp::add;
  if (s == "-" || s == "−") return ExprOp::sub;
  if (s == "*" || s == "×") return ExprOp::mul;
  if (s == "/" || s == "÷") return ExprOp::div;
  if (s == "^") return ExprOp::pow;
  if (s == "root2") return ExprOp::root2;
  if (s == "root3") return ExprOp::root3;
  return std::nullopt;
}

inline std::optional<ExprOp> expr_op_of(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return ExprOp::add;
    case BinaryOp::sub: return ExprOp::sub;
    case BinaryOp::mul: return ExprOp::mul;
    case BinaryOp::div: return ExprOp::div;
    case BinaryOp::pow: return ExprOp::pow;
  }
  return std::nullopt;
}

inline const char* to_string(FollowupKind k) {
  return k == FollowupKind::incremental ? "incremental" : "counterfactual";
}

inline std::optional<FollowupKind> followup_from_string(std::string_view s) {
  if (s == "incremental") return FollowupKind::incremental;
  if (s == "counterfactual") return FollowupKind::counterfactual;
  return std::nullopt;
}

inline std::optional<QuestionKind> question_kind_from_string(std::string_view s) {
  for (auto k : {QuestionKind::value, QuestionKind::comparison, QuestionKind::factor_list, QuestionKind::multi_value,
                 QuestionKind::quotient_remainder})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

struct SamplePair {
  std::string symbolic;
  std::string word;
};

struct StandardSpec {
  std::string id;
  int grade = 0;  // 0 = kindergarten
  std::string description;
  std::string short_description;
  ProblemShape problem = ProblemShape::statements;
  QuestionKind question_kind = QuestionKind::value;
  std::set<ExprOp> expression_ops;
  NumberDomain number_domain = NumberDomain::whole;
  long min_number = 0;
  long max_number = 10;
  ExactNumber min_value;
  ExactNumber max_value;
  int max_depth = 1;
  std::pair<int, int> statement_count{1, 4};
  std::vector<FilterSpec> filters;
  std::vector<TransformKind> transforms;
  std::set<FollowupKind> followups;
  bool uses_theme = false;
  std::vector<SamplePair> samples;

  // Shape-specific knobs.
  int decimal_places = 2;
  int max_denominator = 12;
  int max_exponent = 3;
  std::pair<long, long> operand_range{1, 10};  // divisors, coefficients, side lengths
  std::pair<int, int> sides{3, 3};             // polygon side count

  /// Id without a trailing "-variant" suffix.
  std::string family() const { return id.substr(0, id.find('-')); }

  std::string grade_label() const { return grade == 0 ? "K" : std::to_string(grade); }

  bool allows(ExprOp op) const { return expression_ops.count(op) > 0; }
};

/// Grade encoded in a standard id: "K..." is 0, otherwise the leading digit.
inline std::optional<int> grade_from_id(std::string_view id) {
  if (id.empty()) return std::nullopt;
  if (id[0] == 'K') return 0;
  if (id[0] >= '1' && id[0] <= '8') return id[0] - '0';
  return std::nullopt;
}

}  // namespace mathcamps
