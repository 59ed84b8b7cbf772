#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "epibias/config.hpp"
#include "epibias/error.hpp"

#ifndef EPIBIAS_DEFAULT_DATA_DIR
#define EPIBIAS_DEFAULT_DATA_DIR "data"
#endif

namespace epibias {

namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::optional<HttpEndpoint> endpoint(const json& j, const char* name) {
  if (!j.contains(name) || j[name].is_null()) return std::nullopt;
  const json& e = j[name];
  HttpEndpoint ep;
  ep.base_url = e.at("base_url").get<std::string>();
  ep.path = e.value("path", "/");
  ep.timeout_seconds = e.value("timeout_seconds", 10);
  return ep;
}

}  // namespace

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("EPIBIAS_DATA_DIR"); env && *env) return env;
  return EPIBIAS_DEFAULT_DATA_DIR;
}

Config Config::defaults(const std::filesystem::path& data_dir) {
  Config c;
  c.lexicon = data_dir / "lexicon.jsonl";
  c.resources = data_dir / "resources.json";
  c.weights = data_dir / "weights" / "scorer_weights.json";
  c.fixtures = data_dir / "fixtures";
  c.rules = data_dir / "rules.json";
  c.documents = "documents.jsonl";
  return c;
}

Config Config::parse(std::string_view text, const std::filesystem::path& base_dir,
                     const std::filesystem::path& data_dir) {
  Config c = defaults(data_dir);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw Error(ErrorCode::ConfigError, std::string("config: ") + ex.what(), "config");
  }
  try {
    c.fixture_mode = j.value("fixture_mode", c.fixture_mode);
    if (j.contains("paths")) {
      const json& p = j["paths"];
      const auto set = [&](const char* key, std::filesystem::path& out) {
        if (p.contains(key)) out = resolve(base_dir, p[key].get<std::string>());
      };
      set("lexicon", c.lexicon);
      set("resources", c.resources);
      set("stopwords", c.stopwords);
      set("weights", c.weights);
      set("fixtures", c.fixtures);
      set("rules", c.rules);
      set("documents", c.documents);
    }
    if (j.contains("models")) {
      const json& m = j["models"];
      c.tagger.model_id = m.value("token_model_id", c.tagger.model_id);
      c.stereotypes.sentence_model_id = m.value("sentence_model_id", c.stereotypes.sentence_model_id);
    }
    if (j.contains("thresholds")) {
      const json& t = j["thresholds"];
      c.stereotypes.threshold = t.value("relevance", c.stereotypes.threshold);
      c.sentiment.positive = t.value("sentiment_positive", c.sentiment.positive);
      c.sentiment.negative = t.value("sentiment_negative", c.sentiment.negative);
    }
    if (j.contains("endpoints")) {
      const json& e = j["endpoints"];
      c.pos_endpoint = endpoint(e, "pos");
      c.embedding_endpoint = endpoint(e, "embeddings");
      c.costar_endpoint = endpoint(e, "costar");
      c.sbf_endpoint = endpoint(e, "sbf");
      c.polarity_endpoint = endpoint(e, "polarity");
    }
    if (j.contains("server")) {
      const json& s = j["server"];
      c.server.host = s.value("host", c.server.host);
      c.server.port = s.value("port", c.server.port);
      c.server.cors_origin = s.value("cors_origin", c.server.cors_origin);
      c.server.workers = s.value("workers", c.server.workers);
    }
    if (j.contains("search")) {
      const json& s = j["search"];
      c.search.endpoint = s.value("endpoint", c.search.endpoint);
      c.search.api_key_env = s.value("api_key_env", c.search.api_key_env);
      c.search.parallelism = s.value("parallelism", c.search.parallelism);
      c.search.requests_per_second = s.value("requests_per_second", c.search.requests_per_second);
    }
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::ConfigError, std::string("config: ") + ex.what(), "config");
  }
  if (c.sentiment.negative > c.sentiment.positive)
    throw Error(ErrorCode::ConfigError, "config: sentiment_negative exceeds sentiment_positive",
                "config");
  if (c.server.workers == 0) c.server.workers = 1;
  if (c.search.parallelism == 0) c.search.parallelism = 1;
  return c;
}

Config Config::load(const std::filesystem::path& path, const std::filesystem::path& data_dir) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path.string(), "config");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.parent_path(), data_dir);
}

}  // namespace epibias
