#pragma once

// Interfaces to the models the pipeline consumes but does not train:
// contextual token embeddings, sentence embeddings, stereotype generators and
// sentence polarity. Each has a fixture-replay implementation (recorded
// responses on disk) and an HTTP client for a live service.
//
// All implementations are safe to call from several threads at once.

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "epibias/textprep.hpp"

namespace epibias {

// Response of the embedding service for one sentence: one vector per
// requested token, already pooled over sub-word pieces. `pieces` optionally
// carries the model's lowercase view of each token (e.g. the leading
// word piece); empty when the backend does not report it.
struct TokenEmbeddings {
  std::string model_id;
  std::size_t dim = 0;
  std::vector<std::vector<double>> vectors;
  std::vector<std::string> pieces;
};

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  // Throws Error(BackendUnavailable) when no vectors can be produced and
  // Error(DimensionMismatch) when the response does not cover every token.
  virtual TokenEmbeddings embed_tokens(const std::string& model_id, const std::string& sentence,
                                       const std::vector<std::string>& tokens) const = 0;
  virtual std::vector<double> embed_sentence(const std::string& model_id,
                                             const std::string& text) const = 0;
  virtual std::string id() const = 0;
};

enum class GeneratorOrigin { Costar, Sbf };

std::string_view to_string(GeneratorOrigin origin);
std::optional<GeneratorOrigin> parse_generator_origin(std::string_view name);

struct GeneratorOutput {
  std::vector<std::string> stereotypes;  // at most 6
  std::vector<std::string> concepts;     // at most 3
};

class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;
  virtual GeneratorOrigin origin() const = 0;
  // Throws Error(BackendUnavailable) when there is no answer for `sentence`.
  virtual GeneratorOutput generate(const std::string& sentence) const = 0;
  virtual std::string id() const = 0;
};

class PolarityBackend {
 public:
  virtual ~PolarityBackend() = default;
  // Score in [-1, 1].
  virtual double score(const std::string& sentence) const = 0;
  virtual std::string id() const = 0;
};

// ---------------------------------------------------------------------------
// Fixture replay
//
// A fixture directory holds four JSON Lines files:
//   token_embeddings.jsonl    {model_id, sentence, sentence_hash, tokens[], dim, vectors[][], pieces[]?}
//   sentence_embeddings.jsonl {model_id, text, text_hash, dim, vector[]}
//   generators.jsonl          {origin, sentence, sentence_hash, stereotypes[], concepts[]}
//   polarity.jsonl            {sentence, sentence_hash, score}
// Records are keyed by hash_hex(normalize_text(sentence)). A missing file is
// treated as empty.

struct TokenEmbeddingRecord {
  std::string model_id;
  std::string sentence;
  std::vector<std::string> tokens;
  TokenEmbeddings embeddings;
};

struct SentenceEmbeddingRecord {
  std::string model_id;
  std::string text;
  std::vector<double> vector;
};

struct GeneratorRecord {
  GeneratorOrigin origin = GeneratorOrigin::Costar;
  std::string sentence;
  GeneratorOutput output;
};

struct PolarityRecord {
  std::string sentence;
  double score = 0.0;
};

std::string fixture_key(std::string_view text);

class FixtureSet {
 public:
  static FixtureSet load(const std::filesystem::path& dir);
  // Writes the four files, sorted by key so output is byte-stable.
  void save(const std::filesystem::path& dir) const;

  void add(TokenEmbeddingRecord r);
  void add(SentenceEmbeddingRecord r);
  void add(GeneratorRecord r);
  void add(PolarityRecord r);

  const TokenEmbeddingRecord* token_embeddings(std::string_view model_id,
                                               std::string_view sentence) const;
  const SentenceEmbeddingRecord* sentence_embedding(std::string_view model_id,
                                                    std::string_view text) const;
  const GeneratorRecord* generator(GeneratorOrigin origin, std::string_view sentence) const;
  const PolarityRecord* polarity(std::string_view sentence) const;

  std::size_t size() const;

 private:
  static std::string model_key(std::string_view model_id, std::string_view text);

  std::unordered_map<std::string, TokenEmbeddingRecord> tokens_;
  std::unordered_map<std::string, SentenceEmbeddingRecord> sentences_;
  std::unordered_map<std::string, GeneratorRecord> generators_;
  std::unordered_map<std::string, PolarityRecord> polarity_;
};

class FixtureEmbeddingBackend final : public EmbeddingBackend {
 public:
  explicit FixtureEmbeddingBackend(std::shared_ptr<const FixtureSet> fixtures)
      : fixtures_(std::move(fixtures)) {}
  TokenEmbeddings embed_tokens(const std::string& model_id, const std::string& sentence,
                               const std::vector<std::string>& tokens) const override;
  std::vector<double> embed_sentence(const std::string& model_id,
                                     const std::string& text) const override;
  std::string id() const override { return "fixture-embeddings"; }

 private:
  std::shared_ptr<const FixtureSet> fixtures_;
};

class FixtureGeneratorBackend final : public GeneratorBackend {
 public:
  FixtureGeneratorBackend(std::shared_ptr<const FixtureSet> fixtures, GeneratorOrigin origin)
      : fixtures_(std::move(fixtures)), origin_(origin) {}
  GeneratorOrigin origin() const override { return origin_; }
  GeneratorOutput generate(const std::string& sentence) const override;
  std::string id() const override;

 private:
  std::shared_ptr<const FixtureSet> fixtures_;
  GeneratorOrigin origin_;
};

class FixturePolarityBackend final : public PolarityBackend {
 public:
  explicit FixturePolarityBackend(std::shared_ptr<const FixtureSet> fixtures)
      : fixtures_(std::move(fixtures)) {}
  double score(const std::string& sentence) const override;
  std::string id() const override { return "fixture-polarity"; }

 private:
  std::shared_ptr<const FixtureSet> fixtures_;
};

// ---------------------------------------------------------------------------
// HTTP clients. `base_url` is scheme://host[:port]; every call is a JSON POST
// to `path`. Connection failures and non-2xx answers raise
// Error(BackendUnavailable) with the backend id as stage.

struct HttpEndpoint {
  std::string base_url;
  std::string path;
  int timeout_seconds = 10;
};

// POST {sentence} -> [{surface, pos, lemma}]
class HttpPosBackend final : public PosBackend {
 public:
  explicit HttpPosBackend(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::vector<PosAnnotation> annotate(std::string_view sentence) const override;
  std::string id() const override { return "http-pos " + endpoint_.base_url; }

 private:
  HttpEndpoint endpoint_;
};

// POST {model_id, sentence, tokens[]} -> {vectors[][], dim, pieces[]?}
// Sentence embeddings use the same call with an empty token list; the
// service answers with a single vector.
class HttpEmbeddingBackend final : public EmbeddingBackend {
 public:
  explicit HttpEmbeddingBackend(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  TokenEmbeddings embed_tokens(const std::string& model_id, const std::string& sentence,
                               const std::vector<std::string>& tokens) const override;
  std::vector<double> embed_sentence(const std::string& model_id,
                                     const std::string& text) const override;
  std::string id() const override { return "http-embeddings " + endpoint_.base_url; }

 private:
  HttpEndpoint endpoint_;
};

// POST {sentence} -> {stereotypes[], concepts[]}
class HttpGeneratorBackend final : public GeneratorBackend {
 public:
  HttpGeneratorBackend(HttpEndpoint endpoint, GeneratorOrigin origin)
      : endpoint_(std::move(endpoint)), origin_(origin) {}
  GeneratorOrigin origin() const override { return origin_; }
  GeneratorOutput generate(const std::string& sentence) const override;
  std::string id() const override;

 private:
  HttpEndpoint endpoint_;
  GeneratorOrigin origin_;
};

// POST {sentence} -> {score}
class HttpPolarityBackend final : public PolarityBackend {
 public:
  explicit HttpPolarityBackend(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  double score(const std::string& sentence) const override;
  std::string id() const override { return "http-polarity " + endpoint_.base_url; }

 private:
  HttpEndpoint endpoint_;
};

}  // namespace epibias
