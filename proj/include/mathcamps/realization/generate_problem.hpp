#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mathcamps/grammar/generate.hpp"
#include "mathcamps/realization/chat.hpp"
#include "mathcamps/realization/prompts.hpp"
#include "mathcamps/realization/record.hpp"
#include "mathcamps/realization/themes.hpp"

namespace mathcamps {

struct RealizationOptions {
  std::size_t max_attempts = 1000;      // rejection-sampling budget per candidate
  std::size_t max_cycle_attempts = 5;   // realize/back-translate rounds per problem
  const std::vector<std::string>* themes = nullptr;
};

/// Candidate accounting. Every sampled candidate ends up in exactly one of
/// accepted, filter-rejected, cycle-rejected or errored.
struct RealizationStats {
  std::size_t attempts = 0;
  std::size_t accepted = 0;
  std::size_t filter_rejected = 0;
  std::size_t cycle_rejected = 0;
  std::size_t errored = 0;
  std::size_t exhausted = 0;  // problems given up on
  std::map<std::string, std::size_t> rejections;
  std::map<std::string, std::size_t> cycle_verdicts;
  std::size_t prompt_tokens = 0;
  std::size_t completion_tokens = 0;
  std::map<std::string, std::size_t> followups_emitted;
  std::map<std::string, std::size_t> followups_dropped;

  void add_grammar(const GenerationStats& g) {
    attempts += g.attempts;
    filter_rejected += g.attempts - g.accepted;
    for (auto& [k, v] : g.rejections) rejections[k] += v;
  }
  void add_tokens(const ChatResponse& r) {
    prompt_tokens += r.prompt_tokens;
    completion_tokens += r.completion_tokens;
  }
  void merge(const RealizationStats& o) {
    attempts += o.attempts;
    accepted += o.accepted;
    filter_rejected += o.filter_rejected;
    cycle_rejected += o.cycle_rejected;
    errored += o.errored;
    exhausted += o.exhausted;
    for (auto& [k, v] : o.rejections) rejections[k] += v;
    for (auto& [k, v] : o.cycle_verdicts) cycle_verdicts[k] += v;
    prompt_tokens += o.prompt_tokens;
    completion_tokens += o.completion_tokens;
    for (auto& [k, v] : o.followups_emitted) followups_emitted[k] += v;
    for (auto& [k, v] : o.followups_dropped) followups_dropped[k] += v;
  }
};

struct GenerationFailure {
  std::string reason;
  std::vector<CycleVerdict> history;
};

/// Round trip of one symbolic problem through the backend.
struct RoundTrip {
  std::string word_text;
  std::string recovered_text;
  CycleVerdict verdict;
  ChatResponse realization, backtranslation;
};

inline RoundTrip realize_and_check(const StandardSpec& spec, const SymbolicProblem& p, const Answer& answer,
                                   const std::optional<std::string>& theme, ChatBackend& backend) {
  RoundTrip rt;
  rt.realization = backend.complete(build_realization_prompt(spec, p, theme));
  rt.word_text = rt.realization.content;
  rt.backtranslation = backend.complete(build_backtranslation_prompt(spec, rt.word_text));
  rt.recovered_text = rt.backtranslation.content;
  rt.verdict = cycle_check(answer, rt.recovered_text, spec.question_kind);
  return rt;
}

/// Sample, realize, back-translate, compare; first consistent round wins.
/// Throws BackendError when the backend gives up.
inline std::variant<WordProblemRecord, GenerationFailure> generate_problem(const StandardSpec& spec,
                                                                          std::uint64_t seed, ChatBackend& backend,
                                                                          const RealizationOptions& opt,
                                                                          RealizationStats* stats = nullptr) {
  RealizationStats local;
  GenerationFailure failure;
  std::size_t sampled = 0;
  auto finish = [&] {
    if (stats) stats->merge(local);
  };
  for (std::size_t round = 0; round < opt.max_cycle_attempts; ++round) {
    const std::uint64_t round_seed = mix_seed(seed, round);
    GenerationStats g;
    ValidProblem vp;
    try {
      vp = generate_valid(spec, round_seed, opt.max_attempts, &g);
    } catch (const ExhaustedError&) {
      local.add_grammar(g);
      ++local.exhausted;
      failure.reason = "Exhausted:rejection_sampling";
      finish();
      return failure;
    }
    local.add_grammar(g);
    sampled += g.attempts;

    std::optional<std::string> theme;
    if (spec.uses_theme && opt.themes && !opt.themes->empty()) theme = sample_theme(*opt.themes, round_seed);
    RoundTrip rt;
    try {
      rt = realize_and_check(spec, vp.problem, vp.answer, theme, backend);
    } catch (const BackendError&) {
      ++local.errored;
      finish();
      throw;
    }
    local.add_tokens(rt.realization);
    local.add_tokens(rt.backtranslation);
    ++local.cycle_verdicts[to_string(rt.verdict)];
    failure.history.push_back(rt.verdict);
    if (rt.verdict != CycleVerdict::consistent) {
      ++local.cycle_rejected;
      continue;
    }
    ++local.accepted;
    WordProblemRecord rec;
    rec.id = problem_id(spec.id, seed);
    rec.standard = spec.id;
    rec.grade = spec.grade;
    rec.seed = seed;
    rec.problem = vp.problem;
    rec.symbolic_text = print_problem(vp.problem);
    rec.word_text = rt.word_text;
    rec.theme = theme;
    rec.answer = vp.answer;
    rec.cycle = rt.verdict;
    rec.attempts = sampled;
    rec.backend = backend.id();
    rec.prompt_tokens = local.prompt_tokens;
    rec.completion_tokens = local.completion_tokens;
    finish();
    return rec;
  }
  ++local.exhausted;
  failure.reason = "Exhausted:cycle_consistency";
  finish();
  return failure;
}

}  // namespace mathcamps
