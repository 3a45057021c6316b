#include "peerlens/profile/openalex.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "../http_util.hpp"
#include "peerlens/error.hpp"

namespace peerlens::profile {

using nlohmann::json;

std::optional<std::string> normalize_author_id(std::string_view raw) {
  for (std::string_view prefix : {"https://openalex.org/", "http://openalex.org/"}) {
    if (raw.starts_with(prefix)) {
      raw.remove_prefix(prefix.size());
      break;
    }
  }
  if (raw.size() < 2 || raw.size() > 32 || raw.front() != 'A') return std::nullopt;
  if (!std::all_of(raw.begin() + 1, raw.end(), [](unsigned char c) { return std::isdigit(c) != 0; })) {
    return std::nullopt;
  }
  return std::string(raw);
}

std::string reconstruct_abstract(const json& inverted_index) {
  if (!inverted_index.is_object()) return {};
  std::map<long long, std::string> by_position;
  for (const auto& [word, positions] : inverted_index.items()) {
    if (!positions.is_array()) throw Error(ErrorCode::kMalformedResponse, "abstract index entry is not a list");
    for (const auto& p : positions) by_position[p.get<long long>()] = word;
  }
  std::string out;
  for (const auto& [pos, word] : by_position) {
    if (!out.empty()) out.push_back(' ');
    out += word;
  }
  return out;
}

namespace {

std::string short_id(const json& id) {
  const auto s = id.get<std::string>();
  const auto slash = s.rfind('/');
  return slash == std::string::npos ? s : s.substr(slash + 1);
}

std::string string_or_empty(const json& doc, const char* key) {
  const auto it = doc.find(key);
  return (it == doc.end() || it->is_null()) ? std::string() : it->get<std::string>();
}

}  // namespace

AuthorRecord parse_author(const json& doc) {
  try {
    AuthorRecord a;
    a.id = short_id(doc.at("id"));
    a.display_name = string_or_empty(doc, "display_name");
    a.cited_by_count = doc.at("cited_by_count").get<long long>();
    if (a.cited_by_count < 0) throw Error(ErrorCode::kMalformedResponse, "negative cited_by_count");
    return a;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedResponse, std::string("bad author record: ") + e.what());
  }
}

Work parse_work(const json& doc) {
  try {
    Work w;
    w.id = doc.contains("id") ? short_id(doc.at("id")) : std::string();
    w.title = string_or_empty(doc, "title");
    if (w.title.empty()) w.title = string_or_empty(doc, "display_name");
    if (const auto it = doc.find("abstract_inverted_index"); it != doc.end()) {
      w.abstract = reconstruct_abstract(*it);
    }
    if (const auto it = doc.find("publication_year"); it != doc.end() && !it->is_null()) {
      w.publication_year = it->get<int>();
    }
    return w;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedResponse, std::string("bad work record: ") + e.what());
  }
}

OpenAlexClient::OpenAlexClient(Config config)
    : config_(std::move(config)), in_flight_(std::clamp(config_.max_in_flight, 1, 256)) {}

json OpenAlexClient::get_json(const std::string& path_and_query) const {
  const auto url = detail::split_url(config_.base_url);
  auto backoff = config_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    httplib::Result res;
    {
      in_flight_.acquire();
      struct Release {
        std::counting_semaphore<256>& s;
        ~Release() { s.release(); }
      } release{in_flight_};
      auto client = detail::make_client(url.origin, config_.timeout);
      res = client->Get(url.path_prefix + path_and_query, {{"Accept", "application/json"}});
    }

    const bool last = attempt >= config_.max_retries;
    if (!res) {
      if (last) throw Error(ErrorCode::kNetworkError, "OpenAlex unreachable: " + httplib::to_string(res.error()));
    } else if (res->status == 200) {
      try {
        return json::parse(res->body);
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kMalformedResponse, std::string("OpenAlex returned invalid JSON: ") + e.what());
      }
    } else if (res->status == 404) {
      throw HttpError(ErrorCode::kNotFound, "OpenAlex has no such record", 404);
    } else if (res->status == 429) {
      double retry_after = 0.0;
      if (res->has_header("Retry-After")) {
        try {
          retry_after = std::stod(res->get_header_value("Retry-After"));
        } catch (const std::exception&) {
          retry_after = 0.0;
        }
      }
      if (last) throw HttpError(ErrorCode::kRateLimited, "OpenAlex rate limit exceeded", 429, retry_after);
      const auto hinted = std::chrono::milliseconds(static_cast<long long>(retry_after * 1000.0));
      backoff = std::min(std::max(backoff, hinted), config_.max_backoff);
    } else if (res->status >= 500) {
      if (last) {
        throw HttpError(ErrorCode::kUpstreamError, "OpenAlex returned HTTP " + std::to_string(res->status),
                        res->status);
      }
    } else {
      throw HttpError(ErrorCode::kUpstreamError, "OpenAlex returned HTTP " + std::to_string(res->status),
                      res->status);
    }
    std::this_thread::sleep_for(backoff);
    backoff = std::min(backoff * 2, config_.max_backoff);
  }
}

AuthorRecord OpenAlexClient::fetch(const std::string& id) const {
  if (!normalize_author_id(id)) {
    throw Error(ErrorCode::kInvalidArgument, "not an OpenAlex author ID: " + id);
  }
  const std::string mailto = config_.mailto.empty() ? "" : "mailto=" + detail::url_encode(config_.mailto);

  AuthorRecord author = parse_author(get_json("/authors/" + id + (mailto.empty() ? "" : "?" + mailto)));

  const std::size_t per_page = std::clamp<std::size_t>(config_.works_cap, 1, 200);
  std::string cursor = "*";
  while (author.works.size() < config_.works_cap) {
    std::string q = "/works?filter=author.id:" + id + "&sort=publication_date:desc&per-page=" +
                    std::to_string(per_page) +
                    "&select=id,title,publication_year,abstract_inverted_index&cursor=" + detail::url_encode(cursor);
    if (!mailto.empty()) q += "&" + mailto;
    const json page = get_json(q);
    try {
      for (const auto& w : page.at("results")) {
        if (author.works.size() >= config_.works_cap) break;
        author.works.push_back(parse_work(w));
      }
      const auto& next = page.at("meta").at("next_cursor");
      if (next.is_null() || page.at("results").empty()) break;
      cursor = next.get<std::string>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedResponse, std::string("bad works page: ") + e.what());
    }
  }
  return author;
}

FixtureAuthorSource::FixtureAuthorSource(std::string directory, std::size_t works_cap)
    : directory_(std::move(directory)), works_cap_(works_cap) {}

AuthorRecord FixtureAuthorSource::fetch(const std::string& id) const {
  if (!normalize_author_id(id)) throw Error(ErrorCode::kInvalidArgument, "not an OpenAlex author ID: " + id);
  std::ifstream in(directory_ + "/" + id + ".json", std::ios::binary);
  if (!in) throw HttpError(ErrorCode::kNotFound, "no fixture for author " + id, 404);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedResponse, std::string("fixture is not JSON: ") + e.what());
  }
  if (!doc.contains("author")) throw Error(ErrorCode::kMalformedResponse, "fixture lacks \"author\"");
  AuthorRecord author = parse_author(doc.at("author"));
  if (doc.contains("works")) {
    for (const auto& w : doc.at("works")) {
      if (author.works.size() >= works_cap_) break;
      author.works.push_back(parse_work(w));
    }
  }
  return author;
}

CachingAuthorSource::CachingAuthorSource(std::shared_ptr<const AuthorSource> inner, std::chrono::seconds ttl,
                                         Clock clock)
    : inner_(std::move(inner)), ttl_(ttl), clock_(clock ? std::move(clock) : Clock(&std::chrono::steady_clock::now)) {}

AuthorRecord CachingAuthorSource::fetch(const std::string& id) const {
  const auto now = clock_();
  {
    std::lock_guard lock(mu_);
    if (auto it = entries_.find(id); it != entries_.end()) {
      if (it->second.expires > now) return it->second.record;
      entries_.erase(it);
    }
  }
  AuthorRecord record = inner_->fetch(id);
  std::lock_guard lock(mu_);
  entries_.insert_or_assign(id, Entry{record, now + ttl_});
  return record;
}

}  // namespace peerlens::profile
