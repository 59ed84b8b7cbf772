#include <cstdlib>
#include <fstream>
#include <sstream>

#include "httplib.h"

#include "epibias/error.hpp"
#include "epibias/ingest.hpp"

namespace epibias {

namespace {

using nlohmann::json;

SearchResult result_from(const json& j) {
  SearchResult r;
  r.headline = j.contains("headline") ? j["headline"].get<std::string>() : j.at("name").get<std::string>();
  r.url = j.value("url", "");
  const std::string ts = j.contains("published_at") ? j["published_at"].get<std::string>()
                                                    : j.at("datePublished").get<std::string>();
  r.published_at = parse_timestamp(ts);
  return r;
}

void raise_for_status(int status, int retry_after, const std::string& query, const std::string& who) {
  if (status == 401 || status == 403)
    throw Error(ErrorCode::AuthError, who + ": credentials rejected (HTTP " + std::to_string(status) + ")",
                "search");
  if (status == 429)
    throw RateLimitedError(who + ": rate limited on '" + query + "'", retry_after);
  if (status < 200 || status >= 300)
    throw Error(ErrorCode::NetworkError,
                who + ": HTTP " + std::to_string(status) + " for '" + query + "'", "search");
}

}  // namespace

MockSearchClient MockSearchClient::parse(std::string_view text) {
  try {
    const json j = json::parse(text);
    std::map<std::string, Response> responses;
    for (const auto& [query, value] : j.at("responses").items()) {
      Response r;
      r.status = value.value("status", 200);
      r.retry_after = value.value("retry_after", 0);
      for (const json& item : value.value("results", json::array())) r.results.push_back(result_from(item));
      responses.emplace(query, std::move(r));
    }
    return MockSearchClient(parse_timestamp(j.at("now").get<std::string>()), std::move(responses));
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::ParseError, std::string("mock search responses: ") + ex.what(), "search");
  }
}

MockSearchClient MockSearchClient::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string(), "search");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

nlohmann::json MockSearchClient::to_json() const {
  json responses = json::object();
  for (const auto& [query, r] : responses_) {
    json results = json::array();
    for (const SearchResult& item : r.results)
      results.push_back({{"headline", item.headline},
                         {"url", item.url},
                         {"published_at", format_timestamp(item.published_at)}});
    responses[query] = {{"status", r.status}, {"retry_after", r.retry_after}, {"results", results}};
  }
  return {{"now", format_timestamp(now_)}, {"responses", responses}};
}

std::vector<SearchResult> MockSearchClient::search(const SearchQuery& query) const {
  {
    std::lock_guard lock(mu_);
    ++calls_;
  }
  auto it = responses_.find(query.query);
  if (it == responses_.end()) return {};
  raise_for_status(it->second.status, it->second.retry_after, query.query, id());
  const auto& all = it->second.results;
  return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(std::min(query.count, all.size()))};
}

std::size_t MockSearchClient::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

HttpSearchClient::HttpSearchClient(std::string endpoint, std::string api_key, int timeout_seconds)
    : api_key_(std::move(api_key)), timeout_seconds_(timeout_seconds) {
  // Split "scheme://host[:port]/path" into client base and request path.
  const std::size_t scheme = endpoint.find("://");
  const std::size_t slash = endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (slash == std::string::npos) {
    base_ = endpoint;
    path_ = "/";
  } else {
    base_ = endpoint.substr(0, slash);
    path_ = endpoint.substr(slash);
  }
}

HttpSearchClient HttpSearchClient::from_env(std::string endpoint, const std::string& api_key_env) {
  const char* key = std::getenv(api_key_env.c_str());
  if (!key || !*key)
    throw Error(ErrorCode::AuthError, "environment variable " + api_key_env + " is not set", "search");
  return HttpSearchClient(std::move(endpoint), key);
}

TimePoint HttpSearchClient::now() const {
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

std::vector<SearchResult> HttpSearchClient::search(const SearchQuery& query) const {
  httplib::Client client(base_);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);
  const httplib::Params params{{"q", query.query},
                               {"count", std::to_string(query.count)},
                               {"freshness", std::to_string(query.freshness_days) + "d"}};
  const httplib::Headers headers{{"X-Api-Key", api_key_}, {"Accept", "application/json"}};
  auto res = client.Get(path_, params, headers);
  if (!res)
    throw Error(ErrorCode::NetworkError,
                id() + ": " + httplib::to_string(res.error()) + " for '" + query.query + "'", "search");
  int retry_after = 0;
  if (res->has_header("Retry-After")) retry_after = std::atoi(res->get_header_value("Retry-After").c_str());
  raise_for_status(res->status, retry_after, query.query, id());
  try {
    const json j = json::parse(res->body);
    const json& items = j.contains("value") ? j["value"] : j.at("results");
    std::vector<SearchResult> out;
    for (const json& item : items) out.push_back(result_from(item));
    if (out.size() > query.count) out.resize(query.count);
    return out;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::NetworkError, id() + ": malformed response: " + ex.what(), "search");
  } catch (const Error& ex) {
    throw Error(ErrorCode::NetworkError, id() + ": malformed response: " + ex.what(), "search");
  }
}

}  // namespace epibias
