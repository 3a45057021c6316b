#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace peerlens::profile {

struct Work {
  std::string id;
  std::string title;
  std::string abstract;
  std::optional<int> publication_year;
};

/// The subset of an OpenAlex author plus their most recent works.
struct AuthorRecord {
  std::string id;  // short form, e.g. "A5023888391"
  std::string display_name;
  long long cited_by_count = 0;
  std::vector<Work> works;  // newest first
};

/// Accepts "A123" or "https://openalex.org/A123" and returns "A123";
/// nullopt for anything else.
std::optional<std::string> normalize_author_id(std::string_view raw);

/// Rebuilds abstract text from OpenAlex's {word: [positions]} index.
/// A null or empty index gives "".
std::string reconstruct_abstract(const nlohmann::json& inverted_index);

/// Parsers for the OpenAlex JSON shapes. Throw Error{kMalformedResponse}.
AuthorRecord parse_author(const nlohmann::json& doc);
Work parse_work(const nlohmann::json& doc);

/// Where author metadata comes from. Implementations are thread-safe.
class AuthorSource {
 public:
  virtual ~AuthorSource() = default;
  /// `id` must already be normalized. Throws NotFound, RateLimited,
  /// NetworkError, UpstreamError or MalformedResponse.
  virtual AuthorRecord fetch(const std::string& id) const = 0;
};

class OpenAlexClient final : public AuthorSource {
 public:
  struct Config {
    std::string base_url = "https://api.openalex.org";
    std::string mailto;  // polite-pool contact, sent when non-empty
    std::size_t works_cap = 100;
    int max_in_flight = 4;
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{500};
    std::chrono::milliseconds max_backoff{8000};
    std::chrono::seconds timeout{30};
  };

  explicit OpenAlexClient(Config config);
  AuthorRecord fetch(const std::string& id) const override;

  const Config& config() const noexcept { return config_; }

 private:
  nlohmann::json get_json(const std::string& path_and_query) const;

  Config config_;
  mutable std::counting_semaphore<256> in_flight_;
};

/// Serves authors from a directory of "<ID>.json" files, each holding
/// {"author": <OpenAlex author>, "works": [<OpenAlex work>, ...]}.
/// Used for offline audits and tests.
class FixtureAuthorSource final : public AuthorSource {
 public:
  explicit FixtureAuthorSource(std::string directory, std::size_t works_cap = 100);
  AuthorRecord fetch(const std::string& id) const override;

 private:
  std::string directory_;
  std::size_t works_cap_;
};

/// In-memory TTL cache in front of another source. Nothing touches disk.
class CachingAuthorSource final : public AuthorSource {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  CachingAuthorSource(std::shared_ptr<const AuthorSource> inner,
                      std::chrono::seconds ttl = std::chrono::hours(1), Clock clock = {});
  AuthorRecord fetch(const std::string& id) const override;

 private:
  struct Entry {
    AuthorRecord record;
    std::chrono::steady_clock::time_point expires;
  };

  std::shared_ptr<const AuthorSource> inner_;
  std::chrono::seconds ttl_;
  Clock clock_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, Entry> entries_;
};

}  // namespace peerlens::profile
