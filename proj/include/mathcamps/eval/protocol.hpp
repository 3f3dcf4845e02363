#pragma once

#include <string>

#include "mathcamps/realization/chat.hpp"

namespace mathcamps {

struct EvalProtocolConfig {
  std::string system_message =
      "You are a mathematics teacher that solves all problems correctly and explains your reasoning. "
      "Write your final answer in the last line of your response.";
  std::string shot_user =
      "Natalia sold clips to 48 of her friends in April, and then she sold half as many clips in May. "
      "How many clips did Natalia sell altogether in April and May?";
  std::string shot_assistant =
      "Reasoning: Natalia sold 48/2 = <<48/2=24>>24 clips in May.\n"
      "Natalia sold 48+24 = <<48+24=72>>72 clips altogether in April and May.\n"
      "Answer: 72";
  std::string answer_prefix = "Answer:";
  double temperature = 0.0;
  bool re_extraction = false;
};

/// System message, the one-shot pair, then the problem.
inline ChatTranscript build_eval_transcript(const EvalProtocolConfig& cfg, const std::string& problem_text) {
  return {{ChatRole::system, cfg.system_message},
          {ChatRole::user, cfg.shot_user},
          {ChatRole::assistant, cfg.shot_assistant},
          {ChatRole::user, problem_text}};
}

/// The main exchange, the model's own reply verbatim, then the follow-up.
inline ChatTranscript build_followup_transcript(const EvalProtocolConfig& cfg, const std::string& problem_text,
                                                const std::string& main_response, const std::string& followup_text) {
  auto t = build_eval_transcript(cfg, problem_text);
  t.push_back({ChatRole::assistant, main_response});
  t.push_back({ChatRole::user, followup_text});
  return t;
}

}  // namespace mathcamps
