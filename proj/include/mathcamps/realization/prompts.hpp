#pragma once

#include <optional>
#include <string>

#include "mathcamps/dsl/printer.hpp"
#include "mathcamps/grammar/standard.hpp"
#include "mathcamps/realization/chat.hpp"

namespace mathcamps {

inline constexpr const char* kRealizationSystemMessage =
    "You are an assistant that generates math problems based on a specified theme and symbolic structure. "
    "The math problem you generate must follow the operations provided in the symbolic structure. "
    "Do not simplify any of the expressions in the symbolic structure. "
    "For example, if it contains something like 'var x = 2 + 3', the problem you generate must contain both 2 "
    "and 3, and use addition in between them. "
    "Do not use the variable names from the symbolic structure in the problem.";

inline constexpr const char* kBacktranslationSystemMessage =
    "You are an assistant that generates symbolic structures from a given math problem. "
    "Do not generate a theme or math concept in your symbolic structure. "
    "The only thing you return should be the symbolic structure. "
    "It is possible that the symbolic structure consists of only a question. "
    "Don't repeat variable names in the symbolic structure. "
    "The variable names must be made up of only one lowercase letter. "
    "All lines in the symbolic structure except the last one will use the 'var' keyword. "
    "The last line will use the 'question' keyword. Do not use any other keywords. "
    "If there are multiple answers (like in a system of equations), then the variables on the right hand side "
    "of the equal to symbol in the question should be a list where each variable is in quotes.";

inline constexpr const char* kFollowupSystemMessage =
    "You are an assistant that writes follow-up questions for math word problems. "
    "You are given a word problem, its symbolic structure, and the symbolic structure of a follow-up. "
    "Write only the follow-up question as a short new turn in the conversation, keeping the story of the "
    "original problem. Mention every number that the follow-up changes or adds, and do not use the variable "
    "names from the symbolic structure.";

inline constexpr const char* kFollowupHeader = "Follow-up question:";

namespace detail {

inline void append_shots(ChatTranscript& t, const StandardSpec& spec, bool reversed) {
  for (const auto& s : spec.samples) {
    t.push_back({ChatRole::user, reversed ? s.word : s.symbolic});
    t.push_back({ChatRole::assistant, reversed ? s.symbolic : s.word});
  }
}

}  // namespace detail

/// System message, the standard's samples as symbolic->word shots, then the
/// new problem (prefixed with its theme when the standard uses one).
inline ChatTranscript build_realization_prompt(const StandardSpec& spec, const SymbolicProblem& p,
                                               const std::optional<std::string>& theme) {
  ChatTranscript t{{ChatRole::system, kRealizationSystemMessage}};
  detail::append_shots(t, spec, false);
  std::string last;
  if (spec.uses_theme && theme) last = "Theme: " + *theme + "\n";
  last += print_problem(p);
  t.push_back({ChatRole::user, std::move(last)});
  return t;
}

/// Same shots with roles swapped; the model only ever sees the word text.
inline ChatTranscript build_backtranslation_prompt(const StandardSpec& spec, const std::string& word_text) {
  ChatTranscript t{{ChatRole::system, kBacktranslationSystemMessage}};
  detail::append_shots(t, spec, true);
  t.push_back({ChatRole::user, word_text});
  return t;
}

inline ChatTranscript build_followup_prompt(const StandardSpec& spec, const std::string& original_word,
                                            const SymbolicProblem& original, const SymbolicProblem& followup) {
  ChatTranscript t{{ChatRole::system, kFollowupSystemMessage}};
  detail::append_shots(t, spec, false);
  t.push_back({ChatRole::user, "Problem:\n" + original_word + "\nStructure:\n" + print_problem(original) +
                                   "\nFollow-up structure:\n" + print_problem(followup)});
  return t;
}

/// Back-translation of a follow-up: the word problem plus the follow-up turn
/// must recover the complete follow-up structure.
inline ChatTranscript build_followup_backtranslation_prompt(const StandardSpec& spec, const std::string& original_word,
                                                            const std::string& followup_word) {
  return build_backtranslation_prompt(spec, original_word + "\n" + kFollowupHeader + " " + followup_word);
}

}  // namespace mathcamps
