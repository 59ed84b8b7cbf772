#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace epibias {

using TimePoint = std::chrono::sys_seconds;

// ISO-8601 UTC, "2020-01-31T12:00:00Z". parse_timestamp also accepts a
// fractional part and a numeric offset; throws Error(ParseError).
std::string format_timestamp(TimePoint t);
TimePoint parse_timestamp(std::string_view s);

struct Document {
  std::string id;  // document_id(headline)
  std::string headline;
  std::string subject;
  std::string topic;
  std::string source_url;
  TimePoint published_at{};
  TimePoint fetched_at{};

  friend bool operator==(const Document&, const Document&) = default;
};

std::string document_id(std::string_view headline);

// First word of the topic's leading capitalized run: "Kate Middleton
// pregnant" -> "Kate". Falls back to the first word.
std::string subject_from_topic(std::string_view topic);

nlohmann::json to_json(const Document& d);
Document document_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Search clients

struct SearchQuery {
  std::string query;
  std::size_t count = 100;
  int freshness_days = 31;
};

struct SearchResult {
  std::string headline;
  std::string url;
  TimePoint published_at{};
};

// Errors: Error(AuthError) for rejected credentials, RateLimitedError,
// Error(NetworkError) for anything else that prevents an answer.
class SearchClient {
 public:
  virtual ~SearchClient() = default;
  virtual std::vector<SearchResult> search(const SearchQuery& query) const = 0;
  // Clock used for fetched_at and the freshness cut-off.
  virtual TimePoint now() const = 0;
  virtual std::string id() const = 0;
};

// Replays recorded responses:
//   {"now": "<timestamp>",
//    "responses": {"<query>": {"status": 200, "retry_after": 0,
//                              "results": [{"headline", "url", "published_at"}]}}}
// Unknown queries return no results. Returns at most query.count results,
// like the live API.
class MockSearchClient final : public SearchClient {
 public:
  struct Response {
    int status = 200;
    int retry_after = 0;
    std::vector<SearchResult> results;
  };

  MockSearchClient(TimePoint now, std::map<std::string, Response> responses)
      : now_(now), responses_(std::move(responses)) {}
  MockSearchClient(MockSearchClient&& other) noexcept
      : now_(other.now_), responses_(std::move(other.responses_)), calls_(other.calls_) {}
  static MockSearchClient load(const std::filesystem::path& path);
  static MockSearchClient parse(std::string_view json);
  // Inverse of parse().
  nlohmann::json to_json() const;

  std::vector<SearchResult> search(const SearchQuery& query) const override;
  TimePoint now() const override { return now_; }
  std::string id() const override { return "mock-search"; }

  std::size_t calls() const;

 private:
  TimePoint now_;
  std::map<std::string, Response> responses_;
  mutable std::mutex mu_;
  mutable std::size_t calls_ = 0;
};

// Generic news-search REST API: GET <endpoint>?q=&count=&freshness=<days>d
// with the key in the X-Api-Key header. Accepts {"value": [...]} or
// {"results": [...]} with items carrying name|headline, url and
// datePublished|published_at.
class HttpSearchClient final : public SearchClient {
 public:
  HttpSearchClient(std::string endpoint, std::string api_key, int timeout_seconds = 15);
  // Reads the key from the named environment variable; Error(AuthError) if unset.
  static HttpSearchClient from_env(std::string endpoint, const std::string& api_key_env);

  std::vector<SearchResult> search(const SearchQuery& query) const override;
  TimePoint now() const override;
  std::string id() const override { return "http-search " + base_; }

 private:
  std::string base_;
  std::string path_;
  std::string api_key_;
  int timeout_seconds_;
};

// ---------------------------------------------------------------------------
// Crawler

// Spaces calls at least 1/rate seconds apart across threads; rate <= 0
// disables it.
class RateLimiter {
 public:
  explicit RateLimiter(double per_second);
  void acquire();

 private:
  std::mutex mu_;
  std::chrono::steady_clock::duration interval_;
  std::chrono::steady_clock::time_point next_;
};

struct CrawlOptions {
  std::size_t per_topic_limit = 100;
  int max_age_days = 31;
  std::size_t parallelism = 4;
  double requests_per_second = 0.0;
  int max_retries = 2;
  int max_retry_wait_seconds = 30;
  // Replaceable for tests.
  std::function<void(std::chrono::seconds)> sleep;
};

struct TopicOutcome {
  std::string topic;
  std::size_t fetched = 0;  // results returned by the client
  std::size_t kept = 0;     // after limit and freshness filtering
  std::size_t stale = 0;
  std::optional<std::string> error;
};

struct CrawlResult {
  std::vector<Document> documents;  // deduplicated by id, topic order
  std::vector<TopicOutcome> topics;
  std::size_t duplicates = 0;
};

// Throws Error(AuthError); rate-limit and network failures are recorded per
// topic and the crawl continues.
CrawlResult crawl(const std::vector<std::string>& topics, const CrawlOptions& options,
                  const SearchClient& client);

// Summary without the documents: {documents, duplicates, topics: [...]}.
nlohmann::json to_json(const CrawlResult& r);

// One topic per line; blank lines and '#' comments skipped.
std::vector<std::string> load_topics(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Document store: append-only JSON Lines log with an in-memory id index.
// Writes are serialized; reads see a consistent snapshot.

class DocumentStore {
 public:
  // Opens (creating if needed) the log at `path` and indexes its records.
  // Corrupt lines are skipped and counted.
  explicit DocumentStore(std::filesystem::path path);

  // Appends unless a document with the same id is stored. Returns whether
  // the document was written.
  bool put(const Document& doc);
  std::size_t put_all(const std::vector<Document>& docs);

  std::optional<Document> get(std::string_view id) const;
  std::vector<Document> all() const;  // in log order
  std::size_t size() const;
  std::size_t corrupt_records() const;
  const std::filesystem::path& path() const { return path_; }

  struct ReadResult {
    std::vector<Document> documents;
    std::size_t corrupt = 0;
  };
  // Streams the log; repeated ids keep the first record.
  static ReadResult read(const std::filesystem::path& path);

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::vector<Document> docs_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::size_t corrupt_ = 0;
};

}  // namespace epibias
