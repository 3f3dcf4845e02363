#pragma once

#include <map>
#include <string>
#include <vector>

#include "mathcamps/eval/extract.hpp"
#include "mathcamps/eval/reextract.hpp"
#include "mathcamps/realization/chat.hpp"
#include "mathcamps/realization/record.hpp"

namespace mathcamps {

/// Answer of the same kind that differs from `a`.
inline Answer wrong_answer(const Answer& a) {
  return std::visit(
      [](const auto& x) -> Answer {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ScalarAnswer>) {
          return ScalarAnswer{ExactNumber(x.value.value() + 1, x.value.form())};
        } else if constexpr (std::is_same_v<T, ComparisonAnswer>) {
          return ComparisonAnswer{x.symbol == ComparisonSymbol::less ? ComparisonSymbol::greater : ComparisonSymbol::less};
        } else if constexpr (std::is_same_v<T, FactorListAnswer>) {
          auto f = x.factors;
          f.push_back(f.empty() ? 1 : f.back() + 1);
          return FactorListAnswer{f};
        } else if constexpr (std::is_same_v<T, QuotientRemainderAnswer>) {
          return QuotientRemainderAnswer{x.quotient + 1, x.remainder, x.divisor};
        } else {
          auto v = x.values;
          if (!v.empty()) v.front().second = ExactNumber(v.front().second.value() + 1, v.front().second.form());
          return AssignmentAnswer{v};
        }
      },
      a);
}

enum class MockEvalMode { oracle, wrong, main_only };

inline const char* to_string(MockEvalMode m) {
  switch (m) {
    case MockEvalMode::oracle: return "mock_oracle";
    case MockEvalMode::wrong: return "mock_wrong";
    case MockEvalMode::main_only: return "mock_main_only";
  }
  return "mock_oracle";
}

/// Test model that looks questions up in a dataset. `main_only` answers
/// main questions correctly and every follow-up wrongly.
class MockEvalEndpoint : public ChatBackend {
 public:
  MockEvalEndpoint(MockEvalMode mode, const std::vector<WordProblemRecord>& dataset) : mode_(mode) {
    for (const auto& r : dataset) {
      gold_[r.word_text] = r.answer;
      for (const auto& f : r.followups) gold_[f.word_text] = f.answer;
    }
  }

  ChatResponse complete(const ChatTranscript& t) override {
    const auto& question = last_user_message(t).content;
    auto it = gold_.find(question);
    std::string out;
    if (it == gold_.end()) {
      out = "I cannot solve this.";
    } else {
      bool followup = t.size() > 4;
      bool correct = mode_ == MockEvalMode::oracle || (mode_ == MockEvalMode::main_only && !followup);
      out = "Reasoning: worked it out.\nAnswer: " + render_answer(correct ? it->second : wrong_answer(it->second));
    }
    return ChatResponse{out, approx_tokens(t), approx_tokens(out)};
  }

  std::string id() const override { return to_string(mode_); }

 private:
  MockEvalMode mode_;
  std::map<std::string, Answer> gold_;
};

namespace detail {

inline std::optional<long> number_word(const std::string& w) {
  static const char* words[] = {"zero",    "one",     "two",       "three",    "four",     "five",    "six",
                                "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
                                "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen", "twenty"};
  for (long i = 0; i <= 20; ++i)
    if (w == words[i]) return i;
  return std::nullopt;
}

}  // namespace detail

/// Extractor double: reports the last number in the reply, reading spelled
/// out numbers up to twenty as well as digits.
class MockExtractorBackend : public ChatBackend {
 public:
  ChatResponse complete(const ChatTranscript& t) override {
    std::string body = last_user_message(t).content;
    auto kind = AnswerKind::scalar;
    if (body.rfind(kExtractorKindTag, 0) == 0) {
      auto nl = body.find('\n');
      auto k = answer_kind_from_string(body.substr(std::string(kExtractorKindTag).size(),
                                                   nl - std::string(kExtractorKindTag).size()));
      if (k) kind = *k;
      body = nl == std::string::npos ? "" : body.substr(nl + 1);
    }
    std::string out = "Answer: none";
    if (kind == AnswerKind::scalar) {
      std::string word, last;
      auto flush = [&] {
        if (word.empty()) return;
        auto lw = detail::lower(word);
        if (auto n = detail::number_word(lw)) last = std::to_string(*n);
        else if (!detail::numbers_in(word).empty()) last = detail::numbers_in(word).back().to_string();
        word.clear();
      };
      for (char c : body) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '/' || c == '.' || c == '-') word += c;
        else flush();
      }
      flush();
      if (!last.empty()) out = "Answer: " + last;
    } else if (auto a = extract_answer_rule_based(body, kind)) {
      out = "Answer: " + render_answer(*a);
    }
    return ChatResponse{out, approx_tokens(t), approx_tokens(out)};
  }

  std::string id() const override { return "mock_extractor"; }
};

}  // namespace mathcamps
