#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "mathcamps/dsl/parser.hpp"
#include "mathcamps/dsl/printer.hpp"
#include "mathcamps/dsl/rewrite.hpp"
#include "mathcamps/realization/chat.hpp"
#include "mathcamps/realization/prompts.hpp"

namespace mathcamps {

namespace mock {

inline constexpr const char* kOpen = "\xC2\xAB";   // «
inline constexpr const char* kClose = "\xC2\xBB";  // »

/// Last run of consecutive `[[...]]` lines in a message.
inline std::string last_symbolic_group(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> current, last;
  std::string line;
  while (std::getline(in, line)) {
    auto start = line.find_first_not_of(" \t");
    if (start != std::string::npos && line.compare(start, 2, "[[") == 0) {
      current.push_back(line.substr(start));
    } else if (!current.empty()) {
      last = std::move(current);
      current.clear();
    }
  }
  if (!current.empty()) last = std::move(current);
  std::string out;
  for (std::size_t i = 0; i < last.size(); ++i) out += (i ? "\n" : "") + last[i];
  return out;
}

/// `[[var a = 1]]\n[[question h = a]]` -> `« var a = 1 ; question h = a »`,
/// so the word text carries no DSL brackets.
inline std::string encode(const std::string& symbolic) {
  std::istringstream in(symbolic);
  std::string line, body;
  while (std::getline(in, line)) {
    auto a = line.find("[[");
    auto b = line.rfind("]]");
    if (a == std::string::npos || b == std::string::npos || b < a) continue;
    if (!body.empty()) body += " ; ";
    body += line.substr(a + 2, b - a - 2);
  }
  return std::string(kOpen) + " " + body + " " + kClose;
}

/// Inverse of `encode` on the last encoded span; empty when there is none.
inline std::string decode_last(const std::string& text) {
  auto open = text.rfind(kOpen);
  if (open == std::string::npos) return {};
  auto close = text.find(kClose, open);
  if (close == std::string::npos) return {};
  std::string body = text.substr(open + 2, close - open - 2);
  std::string out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    auto next = body.find(" ; ", pos);
    std::string part = body.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    auto s = part.find_first_not_of(' ');
    auto e = part.find_last_not_of(' ');
    if (s != std::string::npos) {
      if (!out.empty()) out += "\n";
      out += "[[" + part.substr(s, e - s + 1) + "]]";
    }
    if (next == std::string::npos) break;
    pos = next + 3;
  }
  return out;
}

inline std::string theme_of(const std::string& text) {
  const std::string tag = "Theme: ";
  if (text.compare(0, tag.size(), tag) != 0) return {};
  return text.substr(tag.size(), text.find('\n') - tag.size());
}

inline constexpr const char* kNoStructure = "the problem is about trains";

}  // namespace mock

/// Deterministic double for the generation pipeline. Realization embeds the
/// structure in the word text; back-translation reads it out again, either
/// faithfully or with the first constant bumped by one.
class MockRealizationBackend : public ChatBackend {
 public:
  explicit MockRealizationBackend(bool perturb) : perturb_(perturb) {}

  ChatResponse complete(const ChatTranscript& t) override {
    const std::string& system = t.front().content;
    const std::string& user = last_user_message(t).content;
    std::string out;
    if (system == kRealizationSystemMessage) {
      auto theme = mock::theme_of(user);
      out = (theme.empty() ? std::string("Solve this problem. ") : "A story about " + theme + ". ") +
            mock::encode(mock::last_symbolic_group(user));
    } else if (system == kFollowupSystemMessage) {
      out = "Now consider this. " + mock::encode(mock::last_symbolic_group(user));
    } else if (system == kBacktranslationSystemMessage) {
      out = mock::decode_last(user);
      if (out.empty()) out = mock::kNoStructure;
      else if (perturb_) out = perturbed(out);
    } else {
      out = mock::kNoStructure;
    }
    return ChatResponse{out, approx_tokens(t), approx_tokens(out)};
  }

  std::string id() const override { return perturb_ ? "mock_perturbing" : "mock_faithful"; }

  /// First constant incremented by one; text returned unchanged if it does
  /// not parse or has no constant.
  static std::string perturbed(const std::string& symbolic) {
    try {
      auto p = parse_problem(symbolic);
      auto consts = enumerate_constants(p);
      if (consts.empty()) return symbolic;
      const auto& [path, v] = consts.front();
      return print_problem(replace_constant(p, path, ExactNumber(v.value() + 1, v.form())));
    } catch (const Error&) {
      return symbolic;
    }
  }

 private:
  bool perturb_;
};

}  // namespace mathcamps
