#include "epibias/error.hpp"
#include "epibias/tagger.hpp"

namespace epibias {

bool is_scoreable(const Token& token) { return !token.is_stopword && token.pos != PosTag::Punct; }

TaggedWord tag_sentence(const std::vector<Token>& tokens, const TmiLabel& tmi,
                        const LexiconStore& lexicon, const EmbeddingBackend& embeddings,
                        const ScorerWeights& weights, const TaggerConfig& config,
                        LookupResult* lookup) {
  std::vector<std::size_t> scoreable;
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (is_scoreable(tokens[i])) scoreable.push_back(i);
  if (scoreable.empty())
    throw Error(ErrorCode::NoScoreableTokens, "no scoreable tokens in sentence", "tag");

  std::vector<std::string> surfaces;
  surfaces.reserve(tokens.size());
  for (const Token& t : tokens) surfaces.push_back(t.surface);
  const std::string sentence = detokenize(tokens);

  const TokenEmbeddings emb = embeddings.embed_tokens(config.model_id, sentence, surfaces);
  if (emb.vectors.size() != tokens.size())
    throw Error(ErrorCode::DimensionMismatch,
                "embedding backend returned " + std::to_string(emb.vectors.size()) +
                    " vectors for " + std::to_string(tokens.size()) + " tokens",
                "tag");

  const std::vector<WordFeatures> all = build_features(tokens, tmi, lexicon);
  std::vector<WordFeatures> features;
  std::vector<std::vector<double>> vectors;
  features.reserve(scoreable.size());
  vectors.reserve(scoreable.size());
  for (std::size_t i : scoreable) {
    features.push_back(all[i]);
    vectors.push_back(emb.vectors[i]);
  }
  const std::vector<double> p = score_words(features, vectors, weights);

  const auto reported = [&](std::size_t i) {
    if (i < emb.pieces.size() && !emb.pieces[i].empty()) return emb.pieces[i];
    return to_lower(tokens[i].surface);
  };

  TaggedWord out;
  out.scores.reserve(scoreable.size());
  for (std::size_t k = 0; k < scoreable.size(); ++k)
    out.scores.push_back({tokens[scoreable[k]].index, reported(scoreable[k]), p[k]});

  const std::size_t best = scoreable[argmax_lowest_index(p)];
  const Token& t = tokens[best];
  out.surface = reported(best);
  out.token_surface = t.surface;
  out.token_index = t.index;
  out.offset = t.offset;
  out.probability = p[argmax_lowest_index(p)];

  LookupResult result = lexicon.lookup(out.surface, t.pos);
  out.in_lexicon = result.matched;
  out.bias_types = result.bias_types;
  if (lookup) *lookup = std::move(result);
  return out;
}

}  // namespace epibias
