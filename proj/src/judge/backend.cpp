#include "peerlens/judge/backend.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "../http_util.hpp"
#include "peerlens/error.hpp"
#include "peerlens/hash.hpp"
#include "peerlens/judge/rubric.hpp"

namespace peerlens::judge {

using nlohmann::json;

HttpChatBackend::HttpChatBackend(Config config)
    : config_(std::move(config)), in_flight_(std::clamp(config_.max_in_flight, 1, 256)) {}

std::string HttpChatBackend::complete(const std::vector<ChatMessage>& messages) const {
  const auto url = detail::split_url(config_.base_url);
  json body = {{"model", config_.model}, {"temperature", 0}, {"messages", json::array()}};
  if (config_.seed) body["seed"] = *config_.seed;
  for (const auto& m : messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});

  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  httplib::Result res;
  {
    in_flight_.acquire();
    struct Release {
      std::counting_semaphore<256>& s;
      ~Release() { s.release(); }
    } release{in_flight_};
    auto client = detail::make_client(url.origin, config_.timeout);
    res = client->Post(url.path_prefix + "/v1/chat/completions", headers, body.dump(), "application/json");
  }
  if (!res) throw Error(ErrorCode::kBackendError, "judge backend unreachable: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw Error(ErrorCode::kBackendError, "judge backend returned HTTP " + std::to_string(res->status));
  }
  try {
    return json::parse(res->body).at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBackendError, std::string("unexpected chat-completion response: ") + e.what());
  }
}

std::string MockJudgeBackend::complete(const std::vector<ChatMessage>& messages) const {
  ++calls_;
  std::string prompt;
  for (const auto& m : messages) {
    if (m.role == "user") {
      prompt = m.content;
      break;
    }
  }
  json reply = json::object();
  for (auto key : kAspectKeys) {
    Fnv1a64 h;
    h.update(key);
    h.update("\n");
    h.update(prompt);
    const int score = 1 + static_cast<int>(h.digest() % 5);
    reply[std::string(key)] = {{"score", score},
                               {"rationale", "mock judgment " + std::to_string(score) + " for " + std::string(key)}};
  }
  return reply.dump();
}

ScriptedJudgeBackend::ScriptedJudgeBackend(std::vector<std::string> replies) : replies_(std::move(replies)) {
  if (replies_.empty()) throw Error(ErrorCode::kInvalidArgument, "scripted backend needs at least one reply");
}

std::string ScriptedJudgeBackend::complete(const std::vector<ChatMessage>& messages) const {
  std::lock_guard lock(mu_);
  const std::size_t i = std::min(calls_, replies_.size() - 1);
  ++calls_;
  last_ = messages;
  return replies_[i];
}

std::size_t ScriptedJudgeBackend::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

std::vector<ChatMessage> ScriptedJudgeBackend::last_messages() const {
  std::lock_guard lock(mu_);
  return last_;
}

std::string FailingJudgeBackend::complete(const std::vector<ChatMessage>&) const {
  ++calls_;
  throw Error(ErrorCode::kBackendError, "judge backend unavailable");
}

}  // namespace peerlens::judge
