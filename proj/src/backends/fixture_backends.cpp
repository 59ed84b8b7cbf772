#include <algorithm>
#include <fstream>
#include <map>

#include "json.hpp"

#include "epibias/backends.hpp"
#include "epibias/error.hpp"
#include "epibias/hashing.hpp"

namespace epibias {

namespace {

using nlohmann::json;

constexpr const char* kTokenFile = "token_embeddings.jsonl";
constexpr const char* kSentenceFile = "sentence_embeddings.jsonl";
constexpr const char* kGeneratorFile = "generators.jsonl";
constexpr const char* kPolarityFile = "polarity.jsonl";

template <typename Fn>
void read_jsonl(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::ParseError,
                  path.string() + ":" + std::to_string(line_no) + ": " + ex.what(), "fixtures");
    }
  }
}

void write_lines(const std::filesystem::path& path, const std::map<std::string, json>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string(), "fixtures");
  for (const auto& [key, row] : rows) out << row.dump() << '\n';
}

Error unavailable(const std::string& backend, const std::string& what) {
  return Error(ErrorCode::BackendUnavailable, backend + ": no fixture for " + what, backend);
}

}  // namespace

std::string_view to_string(GeneratorOrigin origin) {
  return origin == GeneratorOrigin::Costar ? "costar" : "sbf";
}

std::optional<GeneratorOrigin> parse_generator_origin(std::string_view name) {
  if (name == "costar" || name == "costar_backend") return GeneratorOrigin::Costar;
  if (name == "sbf" || name == "sbf_backend") return GeneratorOrigin::Sbf;
  return std::nullopt;
}

std::string fixture_key(std::string_view text) { return hash_hex(normalize_text(text)); }

std::string FixtureSet::model_key(std::string_view model_id, std::string_view text) {
  return std::string(model_id) + "|" + fixture_key(text);
}

void FixtureSet::add(TokenEmbeddingRecord r) {
  std::string key = model_key(r.model_id, r.sentence);
  tokens_[std::move(key)] = std::move(r);
}

void FixtureSet::add(SentenceEmbeddingRecord r) {
  std::string key = model_key(r.model_id, r.text);
  sentences_[std::move(key)] = std::move(r);
}

void FixtureSet::add(GeneratorRecord r) {
  std::string key = model_key(to_string(r.origin), r.sentence);
  generators_[std::move(key)] = std::move(r);
}

void FixtureSet::add(PolarityRecord r) {
  std::string key = fixture_key(r.sentence);
  polarity_[std::move(key)] = std::move(r);
}

const TokenEmbeddingRecord* FixtureSet::token_embeddings(std::string_view model_id,
                                                         std::string_view sentence) const {
  auto it = tokens_.find(model_key(model_id, sentence));
  return it == tokens_.end() ? nullptr : &it->second;
}

const SentenceEmbeddingRecord* FixtureSet::sentence_embedding(std::string_view model_id,
                                                              std::string_view text) const {
  auto it = sentences_.find(model_key(model_id, text));
  return it == sentences_.end() ? nullptr : &it->second;
}

const GeneratorRecord* FixtureSet::generator(GeneratorOrigin origin,
                                             std::string_view sentence) const {
  auto it = generators_.find(model_key(to_string(origin), sentence));
  return it == generators_.end() ? nullptr : &it->second;
}

const PolarityRecord* FixtureSet::polarity(std::string_view sentence) const {
  auto it = polarity_.find(fixture_key(sentence));
  return it == polarity_.end() ? nullptr : &it->second;
}

std::size_t FixtureSet::size() const {
  return tokens_.size() + sentences_.size() + generators_.size() + polarity_.size();
}

FixtureSet FixtureSet::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw Error(ErrorCode::IoError, "fixture directory not found: " + dir.string(), "fixtures");
  FixtureSet set;
  read_jsonl(dir / kTokenFile, [&](const json& j) {
    TokenEmbeddingRecord r;
    r.model_id = j.at("model_id").get<std::string>();
    r.sentence = j.at("sentence").get<std::string>();
    r.tokens = j.at("tokens").get<std::vector<std::string>>();
    r.embeddings.model_id = r.model_id;
    r.embeddings.dim = j.at("dim").get<std::size_t>();
    r.embeddings.vectors = j.at("vectors").get<std::vector<std::vector<double>>>();
    if (j.contains("pieces")) r.embeddings.pieces = j["pieces"].get<std::vector<std::string>>();
    set.add(std::move(r));
  });
  read_jsonl(dir / kSentenceFile, [&](const json& j) {
    SentenceEmbeddingRecord r;
    r.model_id = j.at("model_id").get<std::string>();
    r.text = j.at("text").get<std::string>();
    r.vector = j.at("vector").get<std::vector<double>>();
    set.add(std::move(r));
  });
  read_jsonl(dir / kGeneratorFile, [&](const json& j) {
    GeneratorRecord r;
    const auto origin = parse_generator_origin(j.at("origin").get<std::string>());
    if (!origin) throw json::other_error::create(501, "unknown generator origin", &j);
    r.origin = *origin;
    r.sentence = j.at("sentence").get<std::string>();
    r.output.stereotypes = j.value("stereotypes", std::vector<std::string>{});
    r.output.concepts = j.value("concepts", std::vector<std::string>{});
    set.add(std::move(r));
  });
  read_jsonl(dir / kPolarityFile, [&](const json& j) {
    PolarityRecord r;
    r.sentence = j.at("sentence").get<std::string>();
    r.score = j.at("score").get<double>();
    set.add(std::move(r));
  });
  return set;
}

void FixtureSet::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::map<std::string, json> rows;
  for (const auto& [key, r] : tokens_) {
    json j = {{"model_id", r.model_id},
              {"sentence", r.sentence},
              {"sentence_hash", fixture_key(r.sentence)},
              {"tokens", r.tokens},
              {"dim", r.embeddings.dim},
              {"vectors", r.embeddings.vectors}};
    if (!r.embeddings.pieces.empty()) j["pieces"] = r.embeddings.pieces;
    rows[key] = std::move(j);
  }
  write_lines(dir / kTokenFile, rows);
  rows.clear();
  for (const auto& [key, r] : sentences_)
    rows[key] = {{"model_id", r.model_id},
                 {"text", r.text},
                 {"text_hash", fixture_key(r.text)},
                 {"dim", r.vector.size()},
                 {"vector", r.vector}};
  write_lines(dir / kSentenceFile, rows);
  rows.clear();
  for (const auto& [key, r] : generators_)
    rows[key] = {{"origin", to_string(r.origin)},
                 {"sentence", r.sentence},
                 {"sentence_hash", fixture_key(r.sentence)},
                 {"stereotypes", r.output.stereotypes},
                 {"concepts", r.output.concepts}};
  write_lines(dir / kGeneratorFile, rows);
  rows.clear();
  for (const auto& [key, r] : polarity_)
    rows[key] = {{"sentence", r.sentence}, {"sentence_hash", key}, {"score", r.score}};
  write_lines(dir / kPolarityFile, rows);
}

TokenEmbeddings FixtureEmbeddingBackend::embed_tokens(const std::string& model_id,
                                                      const std::string& sentence,
                                                      const std::vector<std::string>& tokens) const {
  const TokenEmbeddingRecord* r = fixtures_->token_embeddings(model_id, sentence);
  if (!r) throw unavailable(id(), "sentence '" + sentence + "' (" + model_id + ")");
  if (r->tokens != tokens)
    throw Error(ErrorCode::DimensionMismatch,
                "fixture tokens for '" + sentence + "' do not match the tokenizer output",
                id());
  return r->embeddings;
}

std::vector<double> FixtureEmbeddingBackend::embed_sentence(const std::string& model_id,
                                                            const std::string& text) const {
  const SentenceEmbeddingRecord* r = fixtures_->sentence_embedding(model_id, text);
  if (!r) throw unavailable(id(), "text '" + text + "' (" + model_id + ")");
  return r->vector;
}

GeneratorOutput FixtureGeneratorBackend::generate(const std::string& sentence) const {
  const GeneratorRecord* r = fixtures_->generator(origin_, sentence);
  if (!r) throw unavailable(id(), "sentence '" + sentence + "'");
  return r->output;
}

std::string FixtureGeneratorBackend::id() const {
  return "fixture-" + std::string(to_string(origin_));
}

double FixturePolarityBackend::score(const std::string& sentence) const {
  const PolarityRecord* r = fixtures_->polarity(sentence);
  if (!r) throw unavailable(id(), "sentence '" + sentence + "'");
  return r->score;
}

}  // namespace epibias
