#pragma once

#include <string>
#include <variant>

#include "mathcamps/followups/diff.hpp"
#include "mathcamps/realization/generate_problem.hpp"

namespace mathcamps {

/// Phrases the follow-up as a new dialogue turn, back-translates the word
/// problem plus that turn, and keeps it only if the recovered structure has
/// the follow-up's answer.
inline std::variant<FollowUpRecord, GenerationFailure> realize_followup(const StandardSpec& spec,
                                                                       const WordProblemRecord& record,
                                                                       const ProblemDiff& diff, ChatBackend& backend,
                                                                       RealizationStats* stats = nullptr) {
  FollowUpRecord fu;
  fu.kind = diff_kind(diff);
  fu.diff = diff;
  fu.problem = apply_diff(record.problem, diff);
  auto validated = validate_followup(spec, fu.problem);
  if (auto* why = std::get_if<std::string>(&validated)) return GenerationFailure{"Invalid:" + *why, {}};
  fu.answer = std::get<Answer>(validated);

  auto phrased = backend.complete(build_followup_prompt(spec, record.word_text, record.problem, fu.problem));
  fu.word_text = phrased.content;
  auto recovered = backend.complete(build_followup_backtranslation_prompt(spec, record.word_text, fu.word_text));
  if (stats) {
    stats->add_tokens(phrased);
    stats->add_tokens(recovered);
  }
  fu.cycle = cycle_check(fu.answer, recovered.content, spec.question_kind);
  if (fu.cycle != CycleVerdict::consistent) return GenerationFailure{"Cycle", {fu.cycle}};
  return fu;
}

/// Adds one follow-up per enabled kind, trying a few diffs per kind. Kinds
/// that never pass are left out of the record.
inline void attach_followups(const StandardSpec& spec, WordProblemRecord& record, ChatBackend& backend,
                             RealizationStats* stats = nullptr, std::size_t tries_per_kind = 3) {
  for (auto kind : {FollowupKind::incremental, FollowupKind::counterfactual}) {
    if (!spec.followups.count(kind)) continue;
    bool emitted = false;
    for (std::size_t t = 0; t < tries_per_kind && !emitted; ++t) {
      ProblemDiff diff;
      try {
        diff = propose_diff(spec, record.problem, kind, mix_seed(record.seed, t));
      } catch (const NotApplicableError&) {
        break;
      } catch (const ExhaustedError&) {
        break;
      }
      auto result = realize_followup(spec, record, diff, backend, stats);
      if (auto* fu = std::get_if<FollowUpRecord>(&result)) {
        record.followups.push_back(std::move(*fu));
        emitted = true;
      }
    }
    if (stats) ++(emitted ? stats->followups_emitted : stats->followups_dropped)[to_string(kind)];
  }
}

}  // namespace mathcamps
