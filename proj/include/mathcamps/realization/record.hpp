#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mathcamps/followups/diff.hpp"
#include "mathcamps/realization/cycle.hpp"
#include "mathcamps/solver/answer.hpp"

namespace mathcamps {

struct FollowUpRecord {
  FollowupKind kind = FollowupKind::counterfactual;
  ProblemDiff diff;
  SymbolicProblem problem;
  Answer answer;
  std::string word_text;
  CycleVerdict cycle = CycleVerdict::consistent;
};

struct WordProblemRecord {
  std::string id;
  std::string standard;
  int grade = 0;
  std::uint64_t seed = 0;
  SymbolicProblem problem;
  std::string symbolic_text;
  std::string word_text;
  std::optional<std::string> theme;
  Answer answer;
  CycleVerdict cycle = CycleVerdict::consistent;
  std::size_t attempts = 0;
  std::vector<FollowUpRecord> followups;
  std::string backend;
  std::size_t prompt_tokens = 0;
  std::size_t completion_tokens = 0;
};

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xF];
  return s;
}

inline std::string problem_id(const std::string& standard, std::uint64_t seed) { return standard + "-" + hex64(seed); }

}  // namespace mathcamps
