#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mathcamps/solver/answer.hpp"

namespace mathcamps {

enum class AnswerKind { scalar, comparison, factor_list, quotient_remainder, assignment };

inline AnswerKind answer_kind(const Answer& a) { return static_cast<AnswerKind>(a.index()); }

inline const char* to_string(AnswerKind k) {
  static const char* names[] = {"scalar", "comparison", "factor_list", "quotient_remainder", "assignment"};
  return names[static_cast<int>(k)];
}

inline std::optional<AnswerKind> answer_kind_from_string(std::string_view s) {
  for (int i = 0; i < 5; ++i)
    if (s == to_string(static_cast<AnswerKind>(i))) return static_cast<AnswerKind>(i);
  return std::nullopt;
}

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

/// Payload of the last line that starts with the prefix (markdown emphasis
/// and heading marks ignored).
inline std::optional<std::string> prefixed_payload(const std::string& response, const std::string& prefix) {
  const std::string want = lower(prefix);
  auto lines = lines_of(response);
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    std::string l = *it;
    l.erase(std::remove(l.begin(), l.end(), '*'), l.end());
    auto s = l.find_first_not_of(" \t#>-");
    if (s == std::string::npos) continue;
    if (lower(l.substr(s, want.size())) == want) return l.substr(s + want.size());
  }
  return std::nullopt;
}

inline const std::regex& number_regex() {
  static const std::regex re(R"((-?)(\d{1,3}(?:,\d{3})+|\d+)(\.\d+)?(?:\s*/\s*(\d+))?)");
  return re;
}

inline std::vector<ExactNumber> numbers_in(const std::string& text) {
  std::vector<ExactNumber> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), number_regex()); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    std::string whole = m[2].str();
    whole.erase(std::remove(whole.begin(), whole.end(), ','), whole.end());
    std::string lit = m[1].str() + whole + m[3].str();
    if (m[4].matched) lit += "/" + m[4].str();
    if (auto v = ExactNumber::parse(lit)) out.push_back(*v);
  }
  return out;
}

inline std::vector<std::int64_t> integers_in(const std::string& text) {
  std::vector<std::int64_t> out;
  for (const auto& v : numbers_in(text))
    if (v.is_integer() && v.numerator().fits_slong_p()) out.push_back(v.numerator().get_si());
  return out;
}

inline std::optional<ComparisonSymbol> comparison_in(const std::string& text) {
  if (text.find('<') != std::string::npos) return ComparisonSymbol::less;
  if (text.find('>') != std::string::npos) return ComparisonSymbol::greater;
  auto l = lower(text);
  if (l.find("less") != std::string::npos || l.find("smaller") != std::string::npos) return ComparisonSymbol::less;
  if (l.find("greater") != std::string::npos || l.find("more") != std::string::npos ||
      l.find("larger") != std::string::npos || l.find("bigger") != std::string::npos)
    return ComparisonSymbol::greater;
  if (text.find('=') != std::string::npos || l.find("equal") != std::string::npos || l.find("same") != std::string::npos)
    return ComparisonSymbol::equal;
  return std::nullopt;
}

inline std::optional<Answer> parse_payload(const std::string& payload, AnswerKind kind,
                                           const std::vector<VarName>& targets) {
  switch (kind) {
    case AnswerKind::scalar: {
      auto eq = payload.rfind('=');
      auto nums = numbers_in(eq == std::string::npos ? payload : payload.substr(eq + 1));
      if (nums.empty()) return std::nullopt;
      return ScalarAnswer{nums.front()};
    }
    case AnswerKind::comparison: {
      auto c = comparison_in(payload);
      if (!c) return std::nullopt;
      return ComparisonAnswer{*c};
    }
    case AnswerKind::factor_list: {
      auto ints = integers_in(payload);
      if (ints.empty()) return std::nullopt;
      std::sort(ints.begin(), ints.end());
      ints.erase(std::unique(ints.begin(), ints.end()), ints.end());
      return FactorListAnswer{ints};
    }
    case AnswerKind::quotient_remainder: {
      auto ints = integers_in(payload);
      if (ints.empty()) return std::nullopt;
      return QuotientRemainderAnswer{mpz_class(ints[0]), mpz_class(ints.size() > 1 ? ints[1] : 0), mpz_class(0)};
    }
    case AnswerKind::assignment: {
      static const std::regex named(R"(\b([a-z])\s*=\s*(-?[\d.,/ ]+))");
      AssignmentAnswer out;
      for (auto it = std::sregex_iterator(payload.begin(), payload.end(), named); it != std::sregex_iterator(); ++it) {
        auto nums = numbers_in((*it)[2].str());
        if (!nums.empty()) out.values.emplace_back((*it)[1].str()[0], nums.front());
      }
      if (out.values.empty() && !targets.empty()) {
        auto nums = numbers_in(payload);
        if (nums.size() != targets.size()) return std::nullopt;
        for (std::size_t i = 0; i < targets.size(); ++i) out.values.emplace_back(targets[i], nums[i]);
      }
      if (out.values.empty()) return std::nullopt;
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Reads the last `Answer:` line; without one, falls back to the last line
/// that yields an answer of the expected kind (for scalars, the last number
/// in the response). `targets` names the unknowns for bare value lists.
inline std::optional<Answer> extract_answer_rule_based(const std::string& response, AnswerKind kind,
                                                       const std::vector<VarName>& targets = {},
                                                       const std::string& prefix = "Answer:") {
  if (auto payload = detail::prefixed_payload(response, prefix)) {
    if (auto a = detail::parse_payload(*payload, kind, targets)) return a;
  }
  if (kind == AnswerKind::scalar) {
    auto nums = detail::numbers_in(response);
    if (nums.empty()) return std::nullopt;
    return ScalarAnswer{nums.back()};
  }
  auto lines = detail::lines_of(response);
  for (auto it = lines.rbegin(); it != lines.rend(); ++it)
    if (auto a = detail::parse_payload(*it, kind, targets)) return a;
  return std::nullopt;
}

/// Exact grading. A decimal reply matches a fraction gold of equal value;
/// different kinds never match.
inline bool grade(const std::optional<Answer>& extracted, const Answer& gold) {
  return extracted && answers_equal(*extracted, gold);
}

}  // namespace mathcamps
