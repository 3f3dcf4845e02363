#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mathcamps/dsl/parser.hpp"
#include "mathcamps/dsl/printer.hpp"
#include "mathcamps/eval/run.hpp"
#include "mathcamps/realization/record.hpp"

namespace mathcamps {

using Json = nlohmann::ordered_json;

class FormatError : public Error {
 public:
  using Error::Error;
};

// ---- numbers and answers --------------------------------------------------

inline Json number_to_json(const ExactNumber& v) { return Json{{"value", v.to_num_den()}, {"form", to_string(v.form())}}; }

inline ExactNumber number_from_json(const Json& j) {
  mpq_class q(j.at("value").get<std::string>(), 10);
  q.canonicalize();
  auto form = number_form_from_string(j.at("form").get<std::string>());
  if (!form) throw FormatError("bad number form");
  return ExactNumber(q, *form);
}

inline Json answer_to_json(const Answer& a) {
  Json j{{"kind", to_string(answer_kind(a))}};
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ScalarAnswer>) {
          j["value"] = number_to_json(x.value);
        } else if constexpr (std::is_same_v<T, ComparisonAnswer>) {
          j["symbol"] = std::string(1, symbol_char(x.symbol));
        } else if constexpr (std::is_same_v<T, FactorListAnswer>) {
          j["factors"] = x.factors;
        } else if constexpr (std::is_same_v<T, QuotientRemainderAnswer>) {
          j["quotient"] = x.quotient.get_str();
          j["remainder"] = x.remainder.get_str();
          j["divisor"] = x.divisor.get_str();
        } else {
          Json values = Json::array();
          for (const auto& [name, v] : x.values) values.push_back({{"var", std::string(1, name)}, {"value", number_to_json(v)}});
          j["values"] = values;
        }
      },
      a);
  j["text"] = render_answer(a);
  return j;
}

inline Answer answer_from_json(const Json& j) {
  auto kind = answer_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw FormatError("unknown answer kind");
  switch (*kind) {
    case AnswerKind::scalar: return ScalarAnswer{number_from_json(j.at("value"))};
    case AnswerKind::comparison: {
      auto s = j.at("symbol").get<std::string>();
      if (s == "<") return ComparisonAnswer{ComparisonSymbol::less};
      if (s == ">") return ComparisonAnswer{ComparisonSymbol::greater};
      if (s == "=") return ComparisonAnswer{ComparisonSymbol::equal};
      throw FormatError("bad comparison symbol");
    }
    case AnswerKind::factor_list: return FactorListAnswer{j.at("factors").get<std::vector<std::int64_t>>()};
    case AnswerKind::quotient_remainder:
      return QuotientRemainderAnswer{mpz_class(j.at("quotient").get<std::string>(), 10),
                                     mpz_class(j.at("remainder").get<std::string>(), 10),
                                     mpz_class(j.at("divisor").get<std::string>(), 10)};
    case AnswerKind::assignment: {
      AssignmentAnswer out;
      for (const auto& v : j.at("values")) out.values.emplace_back(v.at("var").get<std::string>().at(0), number_from_json(v.at("value")));
      return out;
    }
  }
  throw FormatError("unknown answer kind");
}

inline Json optional_answer_to_json(const std::optional<Answer>& a) { return a ? answer_to_json(*a) : Json(nullptr); }

inline std::optional<Answer> optional_answer_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return answer_from_json(j);
}

// ---- diffs and dataset records ---------------------------------------------

inline Json diff_to_json(const ProblemDiff& d) {
  if (auto* cf = std::get_if<CounterfactualChange>(&d))
    return Json{{"statement", cf->path.statement},
                {"side", cf->path.side == Side::lhs ? "lhs" : "rhs"},
                {"steps", cf->path.steps},
                {"old", number_to_json(cf->old_value)},
                {"new", number_to_json(cf->new_value)}};
  const auto& inc = std::get<IncrementalExtension>(d);
  Json appended = Json::array();
  for (const auto& s : inc.appended) appended.push_back(print_statement(s));
  return Json{{"appended", appended}, {"question", print_question(inc.question)}};
}

inline ProblemDiff diff_from_json(FollowupKind kind, const Json& j) {
  if (kind == FollowupKind::counterfactual) {
    ConstantPath path{j.at("statement").get<std::size_t>(), j.at("side") == "lhs" ? Side::lhs : Side::rhs,
                      j.at("steps").get<std::vector<int>>()};
    return CounterfactualChange{path, number_from_json(j.at("old")), number_from_json(j.at("new"))};
  }
  std::string text;
  for (const auto& s : j.at("appended")) text += s.get<std::string>() + "\n";
  auto parsed = parse_problem(text + j.at("question").get<std::string>());
  return IncrementalExtension{parsed.statements, parsed.question};
}

struct PipelineMetadata {
  std::string timestamp = "1970-01-01T00:00:00Z";
};

inline Json record_to_json(const WordProblemRecord& r, const PipelineMetadata& meta = {}) {
  Json followups = Json::array();
  for (const auto& f : r.followups)
    followups.push_back({{"kind", to_string(f.kind)},
                         {"symbolic", print_problem(f.problem)},
                         {"word", f.word_text},
                         {"answer", answer_to_json(f.answer)},
                         {"diff", diff_to_json(f.diff)},
                         {"cycle", to_string(f.cycle)}});
  return Json{{"id", r.id},
              {"standard", r.standard},
              {"grade", r.grade},
              {"seed", r.seed},
              {"symbolic", r.symbolic_text},
              {"word", r.word_text},
              {"theme", r.theme ? Json(*r.theme) : Json(nullptr)},
              {"answer", answer_to_json(r.answer)},
              {"cycle", to_string(r.cycle)},
              {"followups", followups},
              {"pipeline",
               {{"backend", r.backend},
                {"attempts", r.attempts},
                {"prompt_tokens", r.prompt_tokens},
                {"completion_tokens", r.completion_tokens},
                {"timestamp", meta.timestamp}}}};
}

inline WordProblemRecord record_from_json(const Json& j) {
  WordProblemRecord r;
  r.id = j.at("id").get<std::string>();
  r.standard = j.at("standard").get<std::string>();
  r.grade = j.at("grade").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.symbolic_text = j.at("symbolic").get<std::string>();
  r.problem = parse_problem(r.symbolic_text);
  r.word_text = j.at("word").get<std::string>();
  if (!j.at("theme").is_null()) r.theme = j.at("theme").get<std::string>();
  r.answer = answer_from_json(j.at("answer"));
  auto cycle = cycle_verdict_from_string(j.value("cycle", std::string("consistent")));
  r.cycle = cycle.value_or(CycleVerdict::inconsistent);
  for (const auto& f : j.at("followups")) {
    FollowUpRecord fu;
    auto kind = followup_from_string(f.at("kind").get<std::string>());
    if (!kind) throw FormatError("bad follow-up kind");
    fu.kind = *kind;
    fu.problem = parse_problem(f.at("symbolic").get<std::string>());
    fu.word_text = f.at("word").get<std::string>();
    fu.answer = answer_from_json(f.at("answer"));
    fu.diff = diff_from_json(fu.kind, f.at("diff"));
    fu.cycle = cycle_verdict_from_string(f.value("cycle", std::string("consistent"))).value_or(CycleVerdict::inconsistent);
    r.followups.push_back(std::move(fu));
  }
  const auto& p = j.at("pipeline");
  r.backend = p.value("backend", std::string());
  r.attempts = p.value("attempts", std::size_t{0});
  r.prompt_tokens = p.value("prompt_tokens", std::size_t{0});
  r.completion_tokens = p.value("completion_tokens", std::size_t{0});
  return r;
}

// ---- eval records -----------------------------------------------------------

inline Json graded_to_json(const GradedReply& g) {
  return Json{{"raw", g.raw},
              {"extracted", optional_answer_to_json(g.extracted)},
              {"extraction_stage", to_string(g.stage)},
              {"correct", g.correct}};
}

inline GradedReply graded_from_json(const Json& j) {
  GradedReply g;
  g.raw = j.at("raw").get<std::string>();
  g.extracted = optional_answer_from_json(j.at("extracted"));
  g.stage = extraction_stage_from_string(j.at("extraction_stage").get<std::string>()).value_or(ExtractionStage::failed);
  g.correct = j.at("correct").get<bool>();
  return g;
}

inline Json eval_record_to_json(const EvalRecord& r) {
  Json j{{"problem_id", r.problem_id}, {"standard", r.standard}, {"grade", r.grade}, {"model", r.model}};
  j.update(graded_to_json(r.main));
  Json avail = Json::array();
  for (auto k : r.followups_available) avail.push_back(to_string(k));
  j["followups_available"] = avail;
  Json results = Json::array();
  for (const auto& f : r.followup_results) {
    Json fj{{"kind", to_string(f.kind)}};
    fj.update(graded_to_json(f.reply));
    results.push_back(fj);
  }
  j["followup_results"] = results;
  return j;
}

inline EvalRecord eval_record_from_json(const Json& j) {
  EvalRecord r;
  r.problem_id = j.at("problem_id").get<std::string>();
  r.standard = j.at("standard").get<std::string>();
  r.grade = j.at("grade").get<int>();
  r.model = j.at("model").get<std::string>();
  r.main = graded_from_json(j);
  for (const auto& k : j.at("followups_available")) {
    auto kind = followup_from_string(k.get<std::string>());
    if (!kind) throw FormatError("bad follow-up kind");
    r.followups_available.push_back(*kind);
  }
  for (const auto& f : j.at("followup_results")) {
    auto kind = followup_from_string(f.at("kind").get<std::string>());
    if (!kind) throw FormatError("bad follow-up kind");
    r.followup_results.push_back({*kind, graded_from_json(f)});
  }
  return r;
}

// ---- line-delimited files ---------------------------------------------------

/// Parsed lines of a JSONL file. A final line without its newline is taken
/// as an interrupted write and ignored.
inline std::vector<Json> read_jsonl(const std::string& path, std::size_t* valid_bytes = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<Json> out;
  std::size_t pos = 0, line_no = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string::npos) break;
    ++line_no;
    std::string line = content.substr(pos, nl - pos);
    if (!line.empty()) {
      try {
        out.push_back(Json::parse(line));
      } catch (const Json::parse_error& e) {
        throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    pos = nl + 1;
  }
  if (valid_bytes) *valid_bytes = pos;
  return out;
}

inline std::vector<WordProblemRecord> load_dataset(const std::string& path) {
  std::vector<WordProblemRecord> out;
  for (const auto& j : read_jsonl(path)) out.push_back(record_from_json(j));
  return out;
}

inline std::vector<EvalRecord> load_eval_records(const std::string& path) {
  std::vector<EvalRecord> out;
  for (const auto& j : read_jsonl(path)) out.push_back(eval_record_from_json(j));
  return out;
}

}  // namespace mathcamps
