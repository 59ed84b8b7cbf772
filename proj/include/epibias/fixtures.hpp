#pragma once

// Synthesis of fixture-replay data.
//
// Token embeddings are constructed so that the scoring head, with the given
// weights and the features the pipeline computes, yields a chosen probability
// for every scored word: b_i is a small deterministic noise vector shifted
// along W_b until b_i . W_b supplies the missing part of the logit.
//
// Sentence embeddings give each distinct candidate text its own basis
// vector e_k (k >= 1) and place a sentence at
//   h = sum_k s_k e_k + sqrt(1 - sum_k s_k^2) e_0
// so cosine(h, e_k) == s_k exactly.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epibias/analysis.hpp"
#include "epibias/backends.hpp"
#include "epibias/ingest.hpp"
#include "epibias/sentiment.hpp"

namespace epibias {

struct ScoredCandidate {
  std::string text;
  double similarity = 0.0;
};

// What the models are expected to answer for one sentence.
struct SentenceSpec {
  std::string sentence;
  std::optional<std::string> subject;
  std::string tagged;  // reported surface of the top word
  // Token carrying the tagged word when it differs from `tagged`, e.g. the
  // model reports the piece "homegr" for the token "homegrown".
  std::optional<std::string> tagged_token;
  double probability = 0.5;
  Sentiment sentiment = Sentiment::Neutral;
  std::optional<ScoredCandidate> top_stereotype;
  std::optional<ScoredCandidate> top_concept;
  std::vector<std::string> fill_stereotypes;  // ranked below the top one
  std::vector<std::string> fill_concepts;
};

// {"rows": [{no, subject, headline, tagged, tagged_token?, probability,
//   sentiment, top_stereotype: {text, similarity} | null,
//   top_concept: {...} | null}], "fill": {"stereotypes": [..], "concepts": [..]}}
// Rows with a top candidate of a kind get `fill_stereotypes` /
// `fill_concepts` further texts of that kind from the fill lists, chosen
// deterministically per row.
std::vector<SentenceSpec> load_sentence_specs(const std::filesystem::path& path,
                                              std::size_t fill_stereotypes = 3,
                                              std::size_t fill_concepts = 2);

struct SynthesisOptions {
  std::string token_model_id = "bert-base-uncased-wnc";
  std::string sentence_model_id = "all-MiniLM-L6-v2";
  double noise_scale = 0.05;
};

// Builds fixtures for every spec. Throws Error(BadRequest) when a spec
// cannot be honoured (tagged word not among the scored tokens, similarities
// whose squares sum past 1).
FixtureSet synthesize_fixtures(const std::vector<SentenceSpec>& specs, const LexiconStore& lexicon,
                               const ScorerWeights& weights, const PosBackend& pos,
                               const StopWords& stopwords, const SynthesisOptions& options = {});

// Deterministic weights for the scoring head with the shipped feature layout.
ScorerWeights synthesize_weights(std::size_t d_h, std::size_t d_b, std::string_view seed);

// A synthetic headline corpus spread over `topics`, plus the specs needed to
// replay it. Headlines are distinct; published_at lies within
// max_age_days of `now`.
struct SyntheticCorpus {
  std::vector<Document> documents;
  std::vector<SentenceSpec> specs;
};
SyntheticCorpus synthesize_corpus(std::size_t n_documents, const std::vector<std::string>& topics,
                                  TimePoint now, int max_age_days, std::string_view seed);

// Recorded search responses for the mock client: `per_topic` items per
// topic, a share of them older than max_age_days, some headlines repeated
// across topics.
MockSearchClient synthesize_search_responses(const std::vector<std::string>& topics,
                                             std::size_t per_topic, TimePoint now,
                                             int max_age_days, std::string_view seed);

}  // namespace epibias
