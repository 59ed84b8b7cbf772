#pragma once

// Per-word bias scoring head.
//
//   e_i = ReLU(f_i W_in)                      hidden layer over expert features
//   P_i = sigmoid(b_i . W_b + e_i . W_e + b)  probability that word i is biased
//
// f_i are expert features (see FeatureLayout), b_i the contextual embedding
// of word i from an EmbeddingBackend. The word with the highest P_i is the
// tagged word.

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epibias/backends.hpp"
#include "epibias/lexicon.hpp"
#include "epibias/textprep.hpp"

namespace epibias {

// f_i layout, D_f = 23:
//   [0, 12)   one-hot POS tag in PosTag order
//   [12, 21)  lexicon flags in kLexiconCategories order (exact lowercase match)
//   21        sentence TMI flag
//   22        token position, index / (n - 1), 0 for a one-token sentence
struct FeatureLayout {
  static constexpr std::size_t kPosOffset = 0;
  static constexpr std::size_t kLexiconOffset = kPosOffset + kPosTagCount;
  static constexpr std::size_t kTmiIndex = kLexiconOffset + kLexiconCategories.size();
  static constexpr std::size_t kPositionIndex = kTmiIndex + 1;
  static constexpr std::size_t kDim = kPositionIndex + 1;

  // Feature names in order, as written in the weights file header.
  static std::vector<std::string> names();
};

struct WordFeatures {
  std::size_t token_index = 0;
  std::vector<double> f;
};

// One WordFeatures per token. `category_count` is the number of lexicon
// categories the caller's layout expects; a mismatch with the store raises
// Error(DimensionMismatch).
std::vector<WordFeatures> build_features(const std::vector<Token>& tokens, const TmiLabel& tmi,
                                         const LexiconStore& lexicon,
                                         std::size_t category_count = kLexiconCategories.size());

struct ScorerWeights {
  std::size_t d_f = 0;
  std::size_t d_h = 0;
  std::size_t d_b = 0;
  std::vector<double> w_in;  // d_f x d_h, row-major
  std::vector<double> w_e;   // d_h
  std::vector<double> w_b;   // d_b
  double b = 0.0;
  std::vector<std::string> feature_names;  // optional, d_f entries when present

  // Throws Error(DimensionMismatch) or Error(NonFiniteInput).
  void validate() const;

  // JSON container:
  //   {"format": "epibias-scorer", "version": 1,
  //    "dims": {"d_f": .., "d_h": .., "d_b": ..}, "features": [..],
  //    "w_in": [[..] x d_f], "w_e": [..], "w_b": [..], "b": ..}
  static ScorerWeights load(const std::filesystem::path& path);
  static ScorerWeights parse(std::string_view json);
  std::string to_json() const;
};

// Logit of one word; exposed for fixture synthesis and tests.
double word_logit(std::span<const double> f, std::span<const double> b_i, const ScorerWeights& w);
// The expert half of the logit, ReLU(f W_in) . W_e, without the embedding
// term or the bias.
double expert_logit(std::span<const double> f, const ScorerWeights& w);

double sigmoid(double x);
double logit(double p);

// P_i for every word. Throws Error(DimensionMismatch) on any shape mismatch
// and Error(NonFiniteInput) on NaN/inf input.
std::vector<double> score_words(const std::vector<WordFeatures>& features,
                                const std::vector<std::vector<double>>& embeddings,
                                const ScorerWeights& weights);

struct ScoredWord {
  std::size_t token_index = 0;
  std::string surface;
  double probability = 0.0;
};

struct TaggedWord {
  std::string surface;  // lowercase form reported by the model
  std::string token_surface;  // the token as written in the sentence
  std::size_t token_index = 0;
  std::size_t offset = 0;  // byte offset of the token in the sentence
  double probability = 0.0;
  BiasTypeSet bias_types{BiasType::Regular};
  bool in_lexicon = false;
  std::vector<ScoredWord> scores;  // every scored word, in token order
};

struct TaggerConfig {
  std::string model_id = "bert-base-uncased-wnc";
};

// Index of the highest probability; ties go to the lowest index.
std::size_t argmax_lowest_index(std::span<const double> probabilities);

// Tokens with is_stopword or PUNCT are not scored. Embeddings are requested
// for the full token list, with detokenize(tokens) as the sentence, so the
// backend sees the whole context.
// Throws Error(NoScoreableTokens), Error(BackendUnavailable) and scorer
// errors. The returned TaggedWord carries in_lexicon/bias_types from the
// lexicon cascade; `lookup` receives the full result when given.
TaggedWord tag_sentence(const std::vector<Token>& tokens, const TmiLabel& tmi,
                        const LexiconStore& lexicon, const EmbeddingBackend& embeddings,
                        const ScorerWeights& weights, const TaggerConfig& config = {},
                        LookupResult* lookup = nullptr);

bool is_scoreable(const Token& token);

}  // namespace epibias
