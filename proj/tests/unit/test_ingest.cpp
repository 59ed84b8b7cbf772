#include <atomic>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "epibias/error.hpp"
#include "epibias/fixtures.hpp"
#include "epibias/ingest.hpp"

using namespace epibias;

namespace {

const TimePoint kNow = parse_timestamp("2022-06-01T00:00:00Z");

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Rate limits the first `failures` calls per query, then answers.
class FlakyClient final : public SearchClient {
 public:
  FlakyClient(int failures, int retry_after) : failures_(failures), retry_after_(retry_after) {}
  std::vector<SearchResult> search(const SearchQuery& q) const override {
    if (calls_++ < failures_) throw RateLimitedError("slow down", retry_after_);
    return {{q.query + " story", "https://x/1", kNow - std::chrono::hours(1)}};
  }
  TimePoint now() const override { return kNow; }
  std::string id() const override { return "flaky"; }
  int calls() const { return calls_; }

 private:
  int failures_;
  int retry_after_;
  mutable std::atomic<int> calls_{0};
};

MockSearchClient::Response status(int code, int retry_after = 0) {
  MockSearchClient::Response r;
  r.status = code;
  r.retry_after = retry_after;
  return r;
}

}  // namespace

TEST_CASE("timestamps") {
  const TimePoint t = parse_timestamp("2022-03-05T07:08:09Z");
  CHECK(format_timestamp(t) == "2022-03-05T07:08:09Z");
  CHECK(parse_timestamp("2022-03-05T07:08:09.123Z") == t);
  CHECK(parse_timestamp("2022-03-05T09:08:09+02:00") == t);
  CHECK(parse_timestamp("2022-03-05T02:38:09-04:30") == t);
  CHECK(parse_timestamp("2022-03-05T07:08:09") == t);
  for (const char* bad : {"", "2022-13-01T00:00:00Z", "2022-02-30T00:00:00Z", "yesterday", "2022-03-05T07:08:09+0200"})
    CHECK_THROWS_AS(parse_timestamp(bad), Error);
}

TEST_CASE("document ids and subjects") {
  CHECK(document_id("Kate wore a dress") == document_id("  kate WORE a   dress "));
  CHECK(document_id("Kate wore a dress") != document_id("Kate wore a hat"));
  CHECK(document_id("x").size() == 16);
  CHECK(subject_from_topic("Kate Middleton pregnant") == "Kate");
  CHECK(subject_from_topic("news about Meghan Markle") == "Meghan");
  CHECK(subject_from_topic("royal news") == "royal");
  CHECK(subject_from_topic("") == "");

  Document d{document_id("h"), "h", "Kate", "Kate Middleton", "https://x", kNow, kNow};
  CHECK(document_from_json(to_json(d)) == d);
  CHECK_THROWS_AS(document_from_json(nlohmann::json{{"headline", "h"}}), Error);
}

TEST_CASE("topics file") {
  const auto dir = test::temp_dir("topics");
  std::ofstream(dir / "t.txt") << "# comment\nKate Middleton\n\n  Meghan Markle  \r\n";
  CHECK(load_topics(dir / "t.txt") == std::vector<std::string>{"Kate Middleton", "Meghan Markle"});
  CHECK_THROWS_AS(load_topics(dir / "missing.txt"), Error);
  CHECK(load_topics(test::data_dir() / "topics.txt").size() == 28);
  std::filesystem::remove_all(dir);
}

TEST_CASE("mock crawl applies limit, freshness and dedup") {
  const auto topics = load_topics(test::data_dir() / "topics.txt");
  const MockSearchClient client = synthesize_search_responses(topics, 120, kNow, 31, "crawl");
  CrawlOptions opt;
  opt.per_topic_limit = 100;
  opt.max_age_days = 31;
  const CrawlResult r = crawl(topics, opt, client);

  // Oracle: fold the raw responses by hand.
  std::set<std::string> seen;
  std::size_t expected_docs = 0, expected_dups = 0;
  for (const std::string& t : topics) {
    const auto raw = client.search({t, 100, 31});
    CHECK(raw.size() == 100);
    for (const SearchResult& s : raw) {
      if (s.published_at < kNow - std::chrono::days(31)) continue;
      if (seen.insert(document_id(s.headline)).second)
        ++expected_docs;
      else
        ++expected_dups;
    }
  }
  CHECK(r.documents.size() == expected_docs);
  CHECK(r.duplicates == expected_dups);
  CHECK(r.duplicates > 0);
  REQUIRE(r.topics.size() == 28);
  for (const TopicOutcome& t : r.topics) {
    CHECK(t.fetched == 100);
    CHECK(t.kept + t.stale == 100);
    CHECK(t.stale > 0);
    CHECK_FALSE(t.error);
  }
  std::set<std::string> ids;
  for (const Document& d : r.documents) {
    ids.insert(d.id);
    CHECK(d.published_at >= kNow - std::chrono::days(31));
    CHECK(d.fetched_at == kNow);
    CHECK(d.subject == subject_from_topic(d.topic));
  }
  CHECK(ids.size() == r.documents.size());

  const nlohmann::json summary = to_json(r);
  CHECK(summary["documents"] == r.documents.size());
  CHECK(summary["topics"].size() == 28);
}

TEST_CASE("crawl output does not depend on parallelism") {
  const auto topics = load_topics(test::data_dir() / "topics.txt");
  const MockSearchClient client = synthesize_search_responses(topics, 50, kNow, 31, "par");
  CrawlOptions one, many;
  one.parallelism = 1;
  many.parallelism = 8;
  CHECK(crawl(topics, one, client).documents == crawl(topics, many, client).documents);
}

TEST_CASE("store is idempotent and skips corrupt records") {
  const auto dir = test::temp_dir("store");
  const auto path = dir / "docs.jsonl";
  const auto topics = load_topics(test::data_dir() / "topics.txt");
  const CrawlResult r = crawl(topics, {}, synthesize_search_responses(topics, 30, kNow, 31, "store"));
  {
    DocumentStore store(path);
    CHECK(store.put_all(r.documents) == r.documents.size());
  }
  const std::string first = slurp(path);
  {
    DocumentStore store(path);
    CHECK(store.size() == r.documents.size());
    CHECK(store.put_all(r.documents) == 0);
    CHECK(store.all() == r.documents);
    CHECK(store.get(r.documents[3].id) == r.documents[3]);
    CHECK_FALSE(store.get("nope"));
  }
  CHECK(slurp(path) == first);

  std::ofstream(path, std::ios::app) << "{not json\n{\"headline\": 3}\n";
  DocumentStore store(path);
  CHECK(store.corrupt_records() == 2);
  CHECK(store.size() == r.documents.size());
  Document extra = r.documents[0];
  extra.headline = "A brand new headline";
  extra.id = document_id(extra.headline);
  CHECK(store.put(extra));
  CHECK(DocumentStore::read(path).documents.size() == r.documents.size() + 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("rate limits are retried with the advertised wait") {
  std::vector<std::chrono::seconds> waits;
  CrawlOptions opt;
  opt.max_retries = 2;
  opt.max_retry_wait_seconds = 30;
  opt.sleep = [&](std::chrono::seconds s) { waits.push_back(s); };

  FlakyClient recovers(2, 45);
  const CrawlResult ok = crawl({"Kate Middleton"}, opt, recovers);
  CHECK(ok.documents.size() == 1);
  CHECK(recovers.calls() == 3);
  CHECK(waits == std::vector<std::chrono::seconds>{std::chrono::seconds(30), std::chrono::seconds(30)});

  waits.clear();
  FlakyClient stuck(10, 1);
  const CrawlResult failed = crawl({"Kate Middleton"}, opt, stuck);
  CHECK(failed.documents.empty());
  REQUIRE(failed.topics.size() == 1);
  CHECK(failed.topics[0].error.has_value());
  CHECK(stuck.calls() == 3);
  CHECK(waits.size() == 2);
}

TEST_CASE("per-topic failures are recorded, auth failures abort") {
  std::map<std::string, MockSearchClient::Response> responses;
  responses["good"].results = {{"Kate wore a dress", "u", kNow}};
  responses["broken"] = status(500);
  responses["limited"] = status(429, 0);
  CrawlOptions opt;
  opt.sleep = [](std::chrono::seconds) {};
  const MockSearchClient client(kNow, responses);
  const CrawlResult r = crawl({"good", "broken", "limited"}, opt, client);
  CHECK(r.documents.size() == 1);
  CHECK_FALSE(r.topics[0].error);
  CHECK(r.topics[1].error.has_value());
  CHECK(r.topics[2].error.has_value());

  responses["denied"] = status(401);
  const MockSearchClient denied(kNow, responses);
  try {
    crawl({"good", "denied"}, opt, denied);
    FAIL("expected AuthError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AuthError);
  }
}

TEST_CASE("mock responses file") {
  const MockSearchClient c = MockSearchClient::parse(R"({"now": "2022-06-01T00:00:00Z", "responses": {
    "Kate": {"results": [{"headline": "a", "url": "u", "published_at": "2022-05-30T00:00:00Z"},
                         {"headline": "b", "url": "u", "published_at": "2022-05-29T00:00:00Z"}]}}})");
  CHECK(c.now() == kNow);
  CHECK(c.search({"Kate", 1, 31}).size() == 1);
  CHECK(c.search({"unknown", 10, 31}).empty());
  CHECK(c.calls() == 2);
  CHECK_THROWS_AS(MockSearchClient::parse("{\"now\": 5}"), Error);
  CHECK_THROWS_AS(MockSearchClient::load("/nonexistent/file.json"), Error);
}

TEST_CASE("rate limiter spaces calls") {
  RateLimiter limiter(50.0);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 6; ++i) limiter.acquire();
  CHECK(std::chrono::steady_clock::now() - start >= std::chrono::milliseconds(95));
  RateLimiter off(0.0);
  off.acquire();
}

TEST_CASE("missing API key is an auth error") {
  ::unsetenv("EPIBIAS_TEST_NO_SUCH_KEY");
  CHECK_THROWS_AS(HttpSearchClient::from_env("http://127.0.0.1:1/search", "EPIBIAS_TEST_NO_SUCH_KEY"), Error);
}
