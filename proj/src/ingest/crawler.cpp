#include <atomic>
#include <fstream>
#include <set>
#include <thread>

#include <spdlog/spdlog.h>

#include "epibias/error.hpp"
#include "epibias/ingest.hpp"

namespace epibias {

RateLimiter::RateLimiter(double per_second)
    : interval_(per_second > 0 ? std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                     std::chrono::duration<double>(1.0 / per_second))
                               : std::chrono::steady_clock::duration::zero()),
      next_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
  if (interval_ == std::chrono::steady_clock::duration::zero()) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mu_);
    const auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_);
    next_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

namespace {

struct TopicFetch {
  TopicOutcome outcome;
  std::vector<Document> documents;
  std::optional<Error> fatal;
};

TopicFetch fetch_topic(const std::string& topic, const CrawlOptions& options,
                       const SearchClient& client, RateLimiter& limiter, TimePoint now) {
  TopicFetch out;
  out.outcome.topic = topic;
  const SearchQuery query{topic, options.per_topic_limit, options.max_age_days};
  std::vector<SearchResult> results;
  for (int attempt = 0;; ++attempt) {
    limiter.acquire();
    try {
      results = client.search(query);
      break;
    } catch (const RateLimitedError& e) {
      if (attempt >= options.max_retries) {
        out.outcome.error = e.what();
        return out;
      }
      const int wait = std::min(std::max(e.retry_after_seconds(), 0), options.max_retry_wait_seconds);
      spdlog::warn("crawl: rate limited on '{}', retrying in {}s", topic, wait);
      if (options.sleep)
        options.sleep(std::chrono::seconds(wait));
      else
        std::this_thread::sleep_for(std::chrono::seconds(wait));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::AuthError) {
        out.fatal = e;
        return out;
      }
      spdlog::warn("crawl: topic '{}' failed: {}", topic, e.what());
      out.outcome.error = e.what();
      return out;
    }
  }

  out.outcome.fetched = results.size();
  const TimePoint cutoff = now - std::chrono::days(options.max_age_days);
  const std::string subject = subject_from_topic(topic);
  for (const SearchResult& r : results) {
    if (out.documents.size() >= options.per_topic_limit) break;
    if (r.published_at < cutoff) {
      ++out.outcome.stale;
      continue;
    }
    Document d;
    d.id = document_id(r.headline);
    d.headline = r.headline;
    d.subject = subject;
    d.topic = topic;
    d.source_url = r.url;
    d.published_at = r.published_at;
    d.fetched_at = now;
    out.documents.push_back(std::move(d));
  }
  out.outcome.kept = out.documents.size();
  return out;
}

}  // namespace

CrawlResult crawl(const std::vector<std::string>& topics, const CrawlOptions& options,
                  const SearchClient& client) {
  CrawlResult result;
  if (topics.empty()) return result;

  const TimePoint now = client.now();
  RateLimiter limiter(options.requests_per_second);
  std::vector<TopicFetch> fetched(topics.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < topics.size(); i = next++)
      fetched[i] = fetch_topic(topics[i], options, client, limiter, now);
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(options.parallelism, topics.size()));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();

  std::set<std::string> seen;
  for (TopicFetch& f : fetched) {
    if (f.fatal) throw *f.fatal;
    for (Document& d : f.documents) {
      if (!seen.insert(d.id).second) {
        ++result.duplicates;
        continue;
      }
      result.documents.push_back(std::move(d));
    }
    result.topics.push_back(std::move(f.outcome));
  }
  return result;
}

std::vector<std::string> load_topics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open topics file " + path.string(), "ingest");
  std::vector<std::string> topics;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const std::size_t e = line.find_last_not_of(" \t\r");
    topics.push_back(line.substr(b, e - b + 1));
  }
  return topics;
}

nlohmann::json to_json(const CrawlResult& r) {
  nlohmann::json topics = nlohmann::json::array();
  for (const TopicOutcome& t : r.topics)
    topics.push_back({{"topic", t.topic},
                      {"fetched", t.fetched},
                      {"kept", t.kept},
                      {"stale", t.stale},
                      {"error", t.error ? nlohmann::json(*t.error) : nlohmann::json(nullptr)}});
  return {{"documents", r.documents.size()}, {"duplicates", r.duplicates}, {"topics", topics}};
}

}  // namespace epibias
