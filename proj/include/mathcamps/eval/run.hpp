#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mathcamps/eval/extract.hpp"
#include "mathcamps/eval/protocol.hpp"
#include "mathcamps/eval/reextract.hpp"
#include "mathcamps/pipeline/ordered.hpp"
#include "mathcamps/realization/record.hpp"

namespace mathcamps {

enum class ExtractionStage { rule, model_assisted, failed };

inline const char* to_string(ExtractionStage s) {
  switch (s) {
    case ExtractionStage::rule: return "rule";
    case ExtractionStage::model_assisted: return "model_assisted";
    case ExtractionStage::failed: return "failed";
  }
  return "failed";
}

inline std::optional<ExtractionStage> extraction_stage_from_string(std::string_view s) {
  for (auto v : {ExtractionStage::rule, ExtractionStage::model_assisted, ExtractionStage::failed})
    if (s == to_string(v)) return v;
  return std::nullopt;
}

struct GradedReply {
  std::string raw;
  std::optional<Answer> extracted;
  ExtractionStage stage = ExtractionStage::failed;
  bool correct = false;
};

struct FollowupResult {
  FollowupKind kind;
  GradedReply reply;
};

struct EvalRecord {
  std::string problem_id;
  std::string standard;
  int grade = 0;
  std::string model;
  GradedReply main;
  std::vector<FollowupKind> followups_available;
  std::vector<FollowupResult> followup_results;

  bool correct() const { return main.correct; }
};

struct EvalOptions {
  EvalProtocolConfig protocol;
  ChatBackend* extractor = nullptr;  // used when protocol.re_extraction is set
  std::size_t jobs = 1;
  std::set<std::string> skip;  // problem ids already evaluated
  bool halt_on_backend_error = false;
};

struct EvalSummary {
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  std::size_t errored = 0;
  std::vector<std::string> errors;
};

inline GradedReply grade_reply(const std::string& raw, const Answer& gold, const std::vector<VarName>& targets,
                               const EvalOptions& opt) {
  GradedReply g;
  g.raw = raw;
  const AnswerKind kind = answer_kind(gold);
  g.extracted = extract_answer_rule_based(raw, kind, targets, opt.protocol.answer_prefix);
  g.stage = g.extracted ? ExtractionStage::rule : ExtractionStage::failed;
  g.correct = grade(g.extracted, gold);
  if (!g.correct && opt.protocol.re_extraction && opt.extractor) {
    auto second = re_extract_model_assisted(raw, kind, *opt.extractor, targets);
    if (grade(second, gold)) {
      g.extracted = second;
      g.stage = ExtractionStage::model_assisted;
      g.correct = true;
    }
  }
  return g;
}

/// Main question first; follow-ups only after a correct main answer, each
/// kind in its own dialogue.
inline EvalRecord evaluate_problem(const WordProblemRecord& problem, ChatBackend& model, const EvalOptions& opt) {
  EvalRecord rec;
  rec.problem_id = problem.id;
  rec.standard = problem.standard;
  rec.grade = problem.grade;
  rec.model = model.id();
  for (const auto& f : problem.followups) rec.followups_available.push_back(f.kind);

  auto main_raw = model.complete(build_eval_transcript(opt.protocol, problem.word_text)).content;
  rec.main = grade_reply(main_raw, problem.answer, problem.problem.question.targets, opt);
  if (!rec.main.correct) return rec;
  for (const auto& f : problem.followups) {
    auto raw = model.complete(build_followup_transcript(opt.protocol, problem.word_text, main_raw, f.word_text)).content;
    rec.followup_results.push_back({f.kind, grade_reply(raw, f.answer, f.problem.question.targets, opt)});
  }
  return rec;
}

/// Evaluates `dataset` in parallel and hands finished records to `sink` in
/// dataset order, so an interrupted run leaves a prefix that `skip` can
/// resume from. A backend failure drops only the affected problem.
inline EvalSummary run_evaluation(const std::vector<WordProblemRecord>& dataset, ChatBackend& model,
                                  const EvalOptions& opt, const std::function<void(const EvalRecord&)>& sink) {
  EvalSummary summary;
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (opt.skip.count(dataset[i].id)) ++summary.skipped;
    else todo.push_back(i);
  }
  using Outcome = std::variant<EvalRecord, std::string>;
  std::atomic<bool> halted{false};
  run_ordered<Outcome>(
      todo.size(), opt.jobs,
      [&](std::size_t k) -> Outcome {
        if (halted) return dataset[todo[k]].id + ": not attempted after backend failure";
        try {
          return evaluate_problem(dataset[todo[k]], model, opt);
        } catch (const BackendError& e) {
          if (opt.halt_on_backend_error) halted = true;
          return dataset[todo[k]].id + ": " + e.what();
        }
      },
      [&](std::size_t, Outcome& o) {
        if (auto* rec = std::get_if<EvalRecord>(&o)) {
          sink(*rec);
          ++summary.evaluated;
        } else {
          ++summary.errored;
          summary.errors.push_back(std::get<std::string>(o));
        }
      });
  return summary;
}

}  // namespace mathcamps
