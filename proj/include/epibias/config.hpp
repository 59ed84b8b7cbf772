#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "epibias/backends.hpp"
#include "epibias/sentiment.hpp"
#include "epibias/stereotypes.hpp"
#include "epibias/tagger.hpp"

namespace epibias {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string cors_origin = "*";
  std::size_t workers = 4;
};

struct SearchConfig {
  std::string endpoint;  // base URL + path of the news-search API
  std::string api_key_env = "EPIBIAS_SEARCH_API_KEY";
  std::size_t parallelism = 4;
  double requests_per_second = 3.0;
};

// Runtime configuration. Relative paths in a config file are resolved
// against the file's directory.
struct Config {
  bool fixture_mode = true;

  std::filesystem::path lexicon;
  std::filesystem::path resources;
  std::filesystem::path stopwords;  // empty: the compiled-in list
  std::filesystem::path weights;
  std::filesystem::path fixtures;
  std::filesystem::path rules;
  std::filesystem::path documents;

  TaggerConfig tagger;
  StereotypeConfig stereotypes;
  SentimentThresholds sentiment;

  // Live backends, used when fixture_mode is false. A missing POS endpoint
  // selects the bundled rule tagger; a missing polarity endpoint selects
  // the bundled rule scorer.
  std::optional<HttpEndpoint> pos_endpoint;
  std::optional<HttpEndpoint> embedding_endpoint;
  std::optional<HttpEndpoint> costar_endpoint;
  std::optional<HttpEndpoint> sbf_endpoint;
  std::optional<HttpEndpoint> polarity_endpoint;

  ServerConfig server;
  SearchConfig search;

  // Shipped data directory layout rooted at `data_dir`, fixture mode.
  static Config defaults(const std::filesystem::path& data_dir);
  // Starts from defaults(data_dir) and overrides with the file's keys.
  static Config load(const std::filesystem::path& path, const std::filesystem::path& data_dir);
  static Config parse(std::string_view json, const std::filesystem::path& base_dir,
                      const std::filesystem::path& data_dir);
};

// Directory holding the shipped data files: $EPIBIAS_DATA_DIR if set,
// otherwise the source tree's data/ recorded at build time.
std::filesystem::path default_data_dir();

}  // namespace epibias
