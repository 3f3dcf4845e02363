#pragma once

#include <optional>
#include <string>

#include "mathcamps/eval/extract.hpp"
#include "mathcamps/realization/chat.hpp"

namespace mathcamps {

inline constexpr const char* kExtractorSystemMessage =
    "You read a worked solution to a math problem and report its final answer. "
    "Reply with exactly one line of the form 'Answer: <value>'. "
    "If the solution never commits to an answer, reply 'Answer: none'.";

inline constexpr const char* kExtractorKindTag = "Expected answer type: ";

inline ChatTranscript build_extractor_prompt(const std::string& response, AnswerKind kind) {
  auto user = [&](const char* k, const std::string& body) {
    return ChatMessage{ChatRole::user, std::string(kExtractorKindTag) + k + "\n\n" + body};
  };
  return {
      {ChatRole::system, kExtractorSystemMessage},
      user("scalar", "Tom has 3 apples and buys 4 more, so in the end he holds seven apples."),
      {ChatRole::assistant, "Answer: 7"},
      user("scalar", "12 / 4 = 3 boxes, and 3 * 5 = 15. The total is fifteen dollars, out of the 20 he brought."),
      {ChatRole::assistant, "Answer: 15"},
      user("comparison", "9/12 is bigger than 8/12, so the first fraction is the greater one."),
      {ChatRole::assistant, "Answer: >"},
      user("scalar", "I am not able to work this one out."),
      {ChatRole::assistant, "Answer: none"},
      user(to_string(kind), response),
  };
}

/// Second-chance extraction through a chat model, for replies the rule
/// stage could not grade as correct.
inline std::optional<Answer> re_extract_model_assisted(const std::string& response, AnswerKind kind,
                                                       ChatBackend& extractor,
                                                       const std::vector<VarName>& targets = {}) {
  auto reply = extractor.complete(build_extractor_prompt(response, kind)).content;
  auto payload = detail::prefixed_payload(reply, "Answer:");
  if (!payload) return std::nullopt;
  return detail::parse_payload(*payload, kind, targets);
}

}  // namespace mathcamps
