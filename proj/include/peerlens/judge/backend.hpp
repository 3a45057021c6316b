#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

namespace peerlens::judge {

struct ChatMessage {
  std::string role;  // "system", "user" or "assistant"
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

/// A chat-completion model. Implementations are thread-safe and throw
/// Error{kBackendError} on transport failures.
class JudgeBackend {
 public:
  virtual ~JudgeBackend() = default;
  virtual std::string complete(const std::vector<ChatMessage>& messages) const = 0;
  virtual std::string id() const = 0;
};

/// OpenAI-compatible `POST {base}/v1/chat/completions`, temperature 0.
class HttpChatBackend final : public JudgeBackend {
 public:
  struct Config {
    std::string base_url;
    std::string model;
    std::string api_key;
    std::optional<long long> seed = 0;
    std::chrono::seconds timeout{120};
    int max_in_flight = 2;
  };

  explicit HttpChatBackend(Config config);
  std::string complete(const std::vector<ChatMessage>& messages) const override;
  std::string id() const override { return "http:" + config_.model; }

 private:
  Config config_;
  mutable std::counting_semaphore<256> in_flight_;
};

/// Deterministic offline judge. Each aspect's score is derived from a hash of
/// the aspect key and the prompt, so the same review always gets the same
/// scores. Counts calls for tests.
class MockJudgeBackend final : public JudgeBackend {
 public:
  std::string complete(const std::vector<ChatMessage>& messages) const override;
  std::string id() const override { return "mock"; }
  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  mutable std::atomic<std::size_t> calls_{0};
};

/// Replays canned replies in order, then repeats the last one.
class ScriptedJudgeBackend final : public JudgeBackend {
 public:
  explicit ScriptedJudgeBackend(std::vector<std::string> replies);
  std::string complete(const std::vector<ChatMessage>& messages) const override;
  std::string id() const override { return "scripted"; }
  std::size_t calls() const;
  /// Messages of the most recent call.
  std::vector<ChatMessage> last_messages() const;

 private:
  std::vector<std::string> replies_;
  mutable std::mutex mu_;
  mutable std::size_t calls_ = 0;
  mutable std::vector<ChatMessage> last_;
};

/// Always throws Error{kBackendError}; counts attempts.
class FailingJudgeBackend final : public JudgeBackend {
 public:
  std::string complete(const std::vector<ChatMessage>& messages) const override;
  std::string id() const override { return "failing"; }
  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  mutable std::atomic<std::size_t> calls_{0};
};

}  // namespace peerlens::judge
