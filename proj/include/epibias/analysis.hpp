#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epibias/backends.hpp"
#include "epibias/config.hpp"
#include "epibias/error.hpp"
#include "epibias/lexicon.hpp"
#include "epibias/sentiment.hpp"
#include "epibias/stereotypes.hpp"
#include "epibias/tagger.hpp"
#include "epibias/textprep.hpp"

namespace epibias {

// ---------------------------------------------------------------------------
// Injustice evidence rules

struct RulesConfig {
  std::string version = "default-1";

  std::string testimonial_id = "testimonial.subjective-relevant";
  double testimonial_p_min = 0.5;
  BiasTypeSet testimonial_types{BiasType::Subjectives, BiasType::Hedges, BiasType::Negative};

  std::string character_id = "character.personal-attribute";
  // Case-insensitive substrings of a stereotype text.
  std::vector<std::string> personal_attribute_patterns{"spending habits"};
  Sentiment character_sentiment = Sentiment::Negative;

  std::string framing_id = "framing.polar-bias-type";

  static RulesConfig load(const std::filesystem::path& path);
  static RulesConfig parse(std::string_view json);
};

struct InjusticeFlags {
  bool testimonial = false;
  bool character = false;
  bool framing_evidence = false;
  std::vector<std::string> rationale;
};

// testimonial: probability >= p_min, a testimonial bias type present, and
//   the verdict relevant.
// character: the verdict relevant, a stereotype above the threshold matching
//   a personal-attribute pattern, and the configured sentiment.
// framing_evidence: a non-regular bias type and non-neutral sentiment.
InjusticeFlags derive_flags(const TaggedWord& tagged, const LookupResult& lookup,
                            const RelevanceVerdict& verdict,
                            const std::vector<StereotypeCandidate>& ranked,
                            const SentimentLabel& sentiment, const RulesConfig& rules);

// ---------------------------------------------------------------------------
// Per-sentence pipeline

struct Explanation {
  BiasType bias_type = BiasType::Regular;
  std::string title;
  std::string resource_url;
};

struct ConfigSnapshot {
  std::string pos_backend;
  std::string embedding_backend;
  std::vector<std::string> generator_backends;
  std::string polarity_backend;
  std::string token_model_id;
  std::string sentence_model_id;
  double relevance_threshold = 0.3;
  SentimentThresholds sentiment;
  std::string rules_version;
  std::size_t min_context_words = 3;
};

struct GateResult {
  std::size_t token_count = 0;
  std::size_t content_words = 0;  // non-punctuation tokens after stop-word removal
  bool passed = false;
};

struct AnalysisReport {
  std::string sentence;
  std::optional<std::string> subject;
  GateResult gate;
  TaggedWord tagged;
  TmiLabel tmi;
  LookupResult lookup;
  std::vector<StereotypeCandidate> candidates;  // ranked pool
  RelevanceVerdict verdict;
  SentimentLabel sentiment;
  InjusticeFlags flags;
  std::vector<Explanation> explanations;
  ConfigSnapshot config_snapshot;
  std::vector<std::string> stage_trace;
};

// Everything a pipeline run needs. Shared pieces are immutable; one Engine
// serves any number of concurrent analyze_sentence calls.
struct Engine {
  std::shared_ptr<const LexiconStore> lexicon;
  std::shared_ptr<const ResourceCatalog> resources;
  std::shared_ptr<const StopWords> stopwords;
  std::shared_ptr<const PosBackend> pos;
  std::shared_ptr<const EmbeddingBackend> embeddings;
  std::vector<std::shared_ptr<const GeneratorBackend>> generators;
  std::shared_ptr<const PolarityBackend> polarity;
  std::shared_ptr<const ScorerWeights> weights;
  RulesConfig rules;
  TaggerConfig tagger;
  StereotypeConfig stereotypes;
  SentimentThresholds sentiment;

  static Engine from_config(const Config& config);
  // Fixture-mode engine replaying `fixtures` instead of config.fixtures.
  static Engine with_fixtures(const Config& config, std::shared_ptr<const FixtureSet> fixtures);
  ConfigSnapshot snapshot() const;
};

inline constexpr std::size_t kMinContextWords = 3;

// Stop-word removal, then the word count check. Throws
// Error(NotEnoughContext) below kMinContextWords.
GateResult context_gate(const std::vector<Token>& tokens);

// gate -> tag -> lookup -> stereotype rank -> sentiment -> flags.
// Throws Error(EmptyInput), Error(NotEnoughContext) and backend errors with
// the failing stage recorded in Error::stage().
AnalysisReport analyze_sentence(const std::string& text, const std::optional<std::string>& subject,
                                const Engine& engine);

struct SentenceInput {
  std::string text;
  std::optional<std::string> subject;
};

struct BatchFailure {
  std::size_t index = 0;
  Error error;
};

struct BatchOutcome {
  std::vector<AnalysisReport> reports;  // successful inputs, in input order
  std::vector<BatchFailure> failures;   // in input order
};

// Runs analyze_sentence over `inputs` on `workers` threads. Per-input errors
// are collected; RateLimitedError and non-library exceptions propagate.
BatchOutcome analyze_batch(const std::vector<SentenceInput>& inputs, const Engine& engine,
                           std::size_t workers = 4);

// ---------------------------------------------------------------------------
// Corpus aggregation

// Nesting sentiment -> subject -> bias type. Counts are (report, bias type)
// pairs; `reports` counts distinct reports under a node. `share` is the
// node's count over its parent's count (1 at the root, 0 under an empty
// parent).
struct BreakdownNode {
  std::string name;
  std::size_t count = 0;
  std::size_t reports = 0;
  double share = 0.0;
  std::vector<BreakdownNode> children;

  const BreakdownNode* child(std::string_view name) const;
};

struct ComparativeBreakdown {
  BreakdownNode root{"all", 0, 0, 1.0, {}};

  const BreakdownNode* bucket(Sentiment s) const { return root.child(to_string(s)); }
  std::vector<std::string> subjects() const;
};

// Throws Error(MissingSubject) if a report has no subject.
ComparativeBreakdown comparative_breakdown(const std::vector<AnalysisReport>& reports);

struct DivergenceRow {
  Sentiment sentiment = Sentiment::Neutral;
  std::size_t count_a = 0;
  std::size_t count_b = 0;
  double share_a = 0.0;  // subject a's pairs in this bucket over all of a's pairs
  double share_b = 0.0;
  bool divergent = false;
};

struct FramingDivergence {
  std::string subject_a;
  std::string subject_b;
  double margin = 0.25;
  std::vector<DivergenceRow> rows;  // positive, neutral, negative
};

// Throws Error(UnknownSubject) when either subject has no reports.
FramingDivergence framing_divergence(const ComparativeBreakdown& breakdown,
                                     const std::string& subject_a, const std::string& subject_b,
                                     double margin = 0.25);

}  // namespace epibias
