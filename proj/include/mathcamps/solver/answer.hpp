#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mathcamps/dsl/ast.hpp"
#include "mathcamps/dsl/number.hpp"

namespace mathcamps {

/// What a standard asks for. `quotient_remainder` is derived for division
/// standards whose description talks about remainders.
enum class QuestionKind { value, comparison, factor_list, multi_value, quotient_remainder };

inline const char* to_string(QuestionKind k) {
  switch (k) {
    case QuestionKind::value: return "value";
    case QuestionKind::comparison: return "comparison";
    case QuestionKind::factor_list: return "factor_list";
    case QuestionKind::multi_value: return "multi_value";
    case QuestionKind::quotient_remainder: return "quotient_remainder";
  }
  return "value";
}

enum class ComparisonSymbol { less, equal, greater };

inline char symbol_char(ComparisonSymbol s) {
  switch (s) {
    case ComparisonSymbol::less: return '<';
    case ComparisonSymbol::equal: return '=';
    case ComparisonSymbol::greater: return '>';
  }
  return '=';
}

struct ScalarAnswer {
  ExactNumber value;
};

struct ComparisonAnswer {
  ComparisonSymbol symbol;
};

struct FactorListAnswer {
  std::vector<std::int64_t> factors;  // strictly increasing
};

struct QuotientRemainderAnswer {
  mpz_class quotient;
  mpz_class remainder;
  mpz_class divisor;  // carried for the r < divisor check; not compared
};

struct AssignmentAnswer {
  std::vector<std::pair<VarName, ExactNumber>> values;  // question target order
};

using Answer = std::variant<ScalarAnswer, ComparisonAnswer, FactorListAnswer, QuotientRemainderAnswer,
                            AssignmentAnswer>;

inline const char* answer_kind_name(const Answer& a) {
  switch (a.index()) {
    case 0: return "scalar";
    case 1: return "comparison";
    case 2: return "factor_list";
    case 3: return "quotient_remainder";
    case 4: return "assignment";
  }
  return "scalar";
}

/// Exact answer equality: rationals by value, factor lists as sets,
/// quotient-remainder componentwise, assignments by variable name.
inline bool answers_equal(const Answer& a, const Answer& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, ScalarAnswer>) {
          return same_value(x.value, y.value);
        } else if constexpr (std::is_same_v<T, ComparisonAnswer>) {
          return x.symbol == y.symbol;
        } else if constexpr (std::is_same_v<T, FactorListAnswer>) {
          auto fx = x.factors, fy = y.factors;
          std::sort(fx.begin(), fx.end());
          std::sort(fy.begin(), fy.end());
          fx.erase(std::unique(fx.begin(), fx.end()), fx.end());
          fy.erase(std::unique(fy.begin(), fy.end()), fy.end());
          return fx == fy;
        } else if constexpr (std::is_same_v<T, QuotientRemainderAnswer>) {
          return x.quotient == y.quotient && x.remainder == y.remainder;
        } else {
          if (x.values.size() != y.values.size()) return false;
          for (const auto& [name, value] : x.values) {
            auto it = std::find_if(y.values.begin(), y.values.end(),
                                   [&](const auto& kv) { return kv.first == name; });
            if (it == y.values.end() || !same_value(it->second, value)) return false;
          }
          return true;
        }
      },
      a);
}

/// Human-facing rendering, also used as the `Answer:` payload by test doubles.
inline std::string render_answer(const Answer& a) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ScalarAnswer>) {
          return x.value.to_string();
        } else if constexpr (std::is_same_v<T, ComparisonAnswer>) {
          return std::string(1, symbol_char(x.symbol));
        } else if constexpr (std::is_same_v<T, FactorListAnswer>) {
          std::string s;
          for (std::size_t i = 0; i < x.factors.size(); ++i) {
            if (i) s += ", ";
            s += std::to_string(x.factors[i]);
          }
          return s;
        } else if constexpr (std::is_same_v<T, QuotientRemainderAnswer>) {
          return x.quotient.get_str() + " r " + x.remainder.get_str();
        } else {
          std::string s;
          for (std::size_t i = 0; i < x.values.size(); ++i) {
            if (i) s += ", ";
            s += x.values[i].first;
            s += " = " + x.values[i].second.to_string();
          }
          return s;
        }
      },
      a);
}

}  // namespace mathcamps
