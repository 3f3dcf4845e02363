#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mathcamps {

enum class ChatRole { system, user, assistant };

inline const char* to_string(ChatRole r) {
  switch (r) {
    case ChatRole::system: return "system";
    case ChatRole::user: return "user";
    case ChatRole::assistant: return "assistant";
  }
  return "user";
}

struct ChatMessage {
  ChatRole role;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

using ChatTranscript = std::vector<ChatMessage>;

/// Leading system message, then strictly alternating user/assistant turns
/// starting with user.
inline bool transcript_well_formed(const ChatTranscript& t) {
  if (t.empty() || t.front().role != ChatRole::system) return false;
  for (std::size_t i = 1; i < t.size(); ++i) {
    ChatRole expected = (i % 2 == 1) ? ChatRole::user : ChatRole::assistant;
    if (t[i].role != expected) return false;
  }
  return true;
}

inline const ChatMessage& last_user_message(const ChatTranscript& t) {
  for (auto it = t.rbegin(); it != t.rend(); ++it)
    if (it->role == ChatRole::user) return *it;
  throw std::invalid_argument("transcript has no user message");
}

struct ChatResponse {
  std::string content;
  std::size_t prompt_tokens = 0;
  std::size_t completion_tokens = 0;
};

/// A chat-completion endpoint. Implementations must be safe to call from
/// several threads at once.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResponse complete(const ChatTranscript& transcript) = 0;
  /// Stable identifier recorded in emitted files.
  virtual std::string id() const = 0;
};

/// Whitespace token count, used as a cost proxy by offline backends.
inline std::size_t approx_tokens(const std::string& s) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : s) {
    bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

inline std::size_t approx_tokens(const ChatTranscript& t) {
  std::size_t n = 0;
  for (const auto& m : t) n += approx_tokens(m.content);
  return n;
}

}  // namespace mathcamps
