#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "mathcamps/error.hpp"
#include "mathcamps/realization/chat.hpp"

namespace mathcamps {

struct HttpBackendOptions {
  std::string base_url;  // e.g. https://api.openai.com/v1
  std::string model;
  std::string api_key_env = "MATHCAMPS_API_KEY";
  double temperature = 0.0;
  int max_tokens = 1024;
  std::size_t max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::seconds timeout{60};
  std::size_t concurrency = 4;
};

namespace detail {

class Semaphore {
 public:
  explicit Semaphore(std::size_t n) : free_(n ? n : 1) {}
  void acquire() {
    std::unique_lock lock(m_);
    cv_.wait(lock, [&] { return free_ > 0; });
    --free_;
  }
  void release() {
    {
      std::lock_guard lock(m_);
      ++free_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex m_;
  std::condition_variable cv_;
  std::size_t free_;
};

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // prefix without trailing slash
};

inline SplitUrl split_url(const std::string& url) {
  auto scheme = url.find("://");
  auto host_start = scheme == std::string::npos ? 0 : scheme + 3;
  auto slash = url.find('/', host_start);
  SplitUrl out{url.substr(0, slash), slash == std::string::npos ? "" : url.substr(slash)};
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  return out;
}

}  // namespace detail

/// OpenAI-style `/chat/completions` client with bearer auth, exponential
/// backoff on transport errors, 429 and 5xx, and a concurrency cap.
class HttpChatBackend : public ChatBackend {
 public:
  explicit HttpChatBackend(HttpBackendOptions opt)
      : opt_(std::move(opt)), url_(detail::split_url(opt_.base_url)), slots_(opt_.concurrency) {
    if (const char* key = std::getenv(opt_.api_key_env.c_str())) api_key_ = key;
  }

  std::string id() const override { return "http:" + opt_.model; }

  ChatResponse complete(const ChatTranscript& t) override {
    nlohmann::json body{{"model", opt_.model}, {"temperature", opt_.temperature}, {"max_tokens", opt_.max_tokens}};
    auto& messages = body["messages"] = nlohmann::json::array();
    for (const auto& m : t) messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
    const std::string payload = body.dump();

    slots_.acquire();
    struct Release {
      detail::Semaphore& s;
      ~Release() { s.release(); }
    } release{slots_};

    auto backoff = opt_.initial_backoff;
    int status = 0;
    std::string detail;
    for (std::size_t attempt = 1; attempt <= opt_.max_retries + 1; ++attempt) {
      httplib::Client client(url_.origin);
      client.set_connection_timeout(opt_.timeout);
      client.set_read_timeout(opt_.timeout);
      client.set_write_timeout(opt_.timeout);
      if (!api_key_.empty()) client.set_bearer_token_auth(api_key_);
      auto res = client.Post(url_.path + "/chat/completions", payload, "application/json");
      if (res && res->status == 200) {
        try {
          auto j = nlohmann::json::parse(res->body);
          ChatResponse out;
          out.content = j.at("choices").at(0).at("message").at("content").get<std::string>();
          if (j.contains("usage")) {
            out.prompt_tokens = j["usage"].value("prompt_tokens", std::size_t{0});
            out.completion_tokens = j["usage"].value("completion_tokens", std::size_t{0});
          }
          return out;
        } catch (const nlohmann::json::exception& e) {
          throw BackendError(200, attempt, std::string("malformed response: ") + e.what());
        }
      }
      status = res ? res->status : 0;
      detail = res ? res->body.substr(0, 200) : httplib::to_string(res.error());
      bool retryable = !res || status == 429 || status >= 500;
      if (!retryable || attempt > opt_.max_retries) throw BackendError(status, attempt, detail);
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    throw BackendError(status, opt_.max_retries + 1, detail);
  }

 private:
  HttpBackendOptions opt_;
  detail::SplitUrl url_;
  detail::Semaphore slots_;
  std::string api_key_;
};

}  // namespace mathcamps
