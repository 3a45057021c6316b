#include "peerlens/profile/profile.hpp"

#include <algorithm>
#include <ctime>
#include <functional>

namespace peerlens::profile {

int calendar_year(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  return tm.tm_year + 1900;
}

std::string iso8601_utc(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ReviewerProfile derive_profile(const AuthorRecord& author, std::string_view submission_text,
                               const text::TextMetrics& metrics, std::chrono::system_clock::time_point now) {
  ReviewerProfile p;
  p.openalex_id = author.id;
  p.citation_count = author.cited_by_count;
  p.works_sampled = author.works.size();
  p.fetched_at = iso8601_utc(now);

  std::optional<int> earliest;
  for (const auto& w : author.works) {
    if (w.publication_year && (!earliest || *w.publication_year < *earliest)) earliest = w.publication_year;
  }
  p.tenure_years = earliest ? std::max(0, calendar_year(now) - *earliest) : 0;

  const auto submission = text::tokenize(submission_text);
  if (submission.empty()) return p;

  std::vector<double> sims;
  sims.reserve(author.works.size());
  for (const auto& w : author.works) {
    const auto work_text = text::tokenize(w.title + "\n" + w.abstract);
    if (work_text.empty()) continue;
    sims.push_back(metrics.paper_similarity(submission, work_text));
  }
  if (sims.empty()) {
    p.topical_alignment = 0.0;
    return p;
  }
  const std::size_t k = std::min(kAlignmentTopK, sims.size());
  std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k), sims.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += sims[i];
  p.topical_alignment = sum / static_cast<double>(k);
  return p;
}

}  // namespace peerlens::profile
