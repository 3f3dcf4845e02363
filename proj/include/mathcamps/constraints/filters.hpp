#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mathcamps/dsl/ast.hpp"
#include "mathcamps/solver/answer.hpp"
#include "mathcamps/solver/solve.hpp"

namespace mathcamps {

enum class FilterName {
  problem_length,
  check_intermediate_values,
  chains_of_variables,
  contains_ten,
  answer_form,
  operator_count,
};

inline const char* to_string(FilterName f) {
  switch (f) {
    case FilterName::problem_length: return "ProblemLength";
    case FilterName::check_intermediate_values: return "CheckIntermediateValues";
    case FilterName::chains_of_variables: return "ChainsOfVariables";
    case FilterName::contains_ten: return "ContainsTen";
    case FilterName::answer_form: return "AnswerForm";
    case FilterName::operator_count: return "OperatorCount";
  }
  return "?";
}

inline std::optional<FilterName> filter_from_string(std::string_view s) {
  for (auto f : {FilterName::problem_length, FilterName::check_intermediate_values,
                 FilterName::chains_of_variables, FilterName::contains_ten, FilterName::answer_form,
                 FilterName::operator_count})
    if (s == to_string(f)) return f;
  return std::nullopt;
}

struct ProblemLengthParams {
  std::size_t min_statements = 1;
  std::size_t max_statements = 4;
};

struct IntermediateValueParams {
  ExactNumber min_value;
  ExactNumber max_value;
};

struct NoParams {};

enum class TenMode { sum_to_ten, literal_ten };

struct ContainsTenParams {
  TenMode mode = TenMode::sum_to_ten;
};

/// Required shape of the answer. `integer` means a whole scalar.
enum class AnswerFormKind { scalar, integer, comparison, factor_list, quotient_remainder, assignment };

struct AnswerFormParams {
  AnswerFormKind form = AnswerFormKind::scalar;
};

struct OperatorCountParams {
  std::size_t max_distinct = 2;
};

struct FilterSpec {
  FilterName name;
  std::variant<ProblemLengthParams, IntermediateValueParams, NoParams, ContainsTenParams, AnswerFormParams,
               OperatorCountParams>
      params;
};

struct FilterVerdict {
  bool pass = true;
  std::string reason;  // "<Filter>:<code>[:detail]" when rejected

  static FilterVerdict ok() { return {}; }
  static FilterVerdict reject(FilterName f, const std::string& code) {
    return {false, std::string(to_string(f)) + ":" + code};
  }
};

namespace detail {

inline std::vector<ExactNumber> all_constants(const SymbolicProblem& p) {
  std::vector<ExactNumber> out;
  for (auto& [path, v] : enumerate_constants(p)) out.push_back(v);
  return out;
}

}  // namespace detail

/// Runs one filter on a solved problem (`ans` must be its answer).
inline FilterVerdict run_filter(const FilterSpec& f, const SymbolicProblem& p, const Answer& ans) {
  switch (f.name) {
    case FilterName::problem_length: {
      const auto& prm = std::get<ProblemLengthParams>(f.params);
      auto n = p.statements.size();
      if (n < prm.min_statements) return FilterVerdict::reject(f.name, "too_short:" + std::to_string(n));
      if (n > prm.max_statements) return FilterVerdict::reject(f.name, "too_long:" + std::to_string(n));
      return FilterVerdict::ok();
    }
    case FilterName::check_intermediate_values: {
      const auto& prm = std::get<IntermediateValueParams>(f.params);
      for (const auto& v : intermediate_values(p, ans)) {
        if (cmp(v.value(), prm.min_value.value()) < 0)
          return FilterVerdict::reject(f.name, "below_min:" + v.to_string());
        if (cmp(v.value(), prm.max_value.value()) > 0)
          return FilterVerdict::reject(f.name, "above_max:" + v.to_string());
      }
      return FilterVerdict::ok();
    }
    case FilterName::chains_of_variables: {
      for (std::size_t i = 0; i < p.statements.size(); ++i)
        if (p.is_definition(i) && p.statements[i].rhs->is_var())
          return FilterVerdict::reject(f.name, "chain:" + std::to_string(i));
      return FilterVerdict::ok();
    }
    case FilterName::contains_ten: {
      const auto& prm = std::get<ContainsTenParams>(f.params);
      auto constants = detail::all_constants(p);
      const mpq_class ten(10);
      if (prm.mode == TenMode::literal_ten) {
        for (const auto& c : constants)
          if (c.value() == ten) return FilterVerdict::ok();
        return FilterVerdict::reject(f.name, "no_literal_ten");
      }
      for (std::size_t i = 0; i < constants.size(); ++i)
        for (std::size_t j = i + 1; j < constants.size(); ++j)
          if (constants[i].value() + constants[j].value() == ten) return FilterVerdict::ok();
      return FilterVerdict::reject(f.name, "no_pair_sums_to_ten");
    }
    case FilterName::answer_form: {
      const auto& prm = std::get<AnswerFormParams>(f.params);
      bool ok = false;
      switch (prm.form) {
        case AnswerFormKind::scalar: ok = std::holds_alternative<ScalarAnswer>(ans); break;
        case AnswerFormKind::integer: {
          auto* s = std::get_if<ScalarAnswer>(&ans);
          ok = s && s->value.is_integer();
          break;
        }
        case AnswerFormKind::comparison: ok = std::holds_alternative<ComparisonAnswer>(ans); break;
        case AnswerFormKind::factor_list: ok = std::holds_alternative<FactorListAnswer>(ans); break;
        case AnswerFormKind::quotient_remainder: ok = std::holds_alternative<QuotientRemainderAnswer>(ans); break;
        case AnswerFormKind::assignment: ok = std::holds_alternative<AssignmentAnswer>(ans); break;
      }
      return ok ? FilterVerdict::ok() : FilterVerdict::reject(f.name, std::string("wrong_form:") + answer_kind_name(ans));
    }
    case FilterName::operator_count: {
      const auto& prm = std::get<OperatorCountParams>(f.params);
      auto use = operators_used(p);
      auto distinct = use.binary.size() + use.root_degrees.size();
      if (distinct > prm.max_distinct)
        return FilterVerdict::reject(f.name, "too_many_operators:" + std::to_string(distinct));
      return FilterVerdict::ok();
    }
  }
  return FilterVerdict::ok();
}

}  // namespace mathcamps
