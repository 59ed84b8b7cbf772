#include <algorithm>

#include "epibias/error.hpp"
#include "epibias/tagger.hpp"

namespace epibias {

std::vector<std::string> FeatureLayout::names() {
  std::vector<std::string> out;
  out.reserve(kDim);
  for (std::size_t i = 0; i < kPosTagCount; ++i)
    out.push_back("pos=" + std::string(to_string(static_cast<PosTag>(i))));
  for (BiasType t : kLexiconCategories) out.push_back("lex=" + std::string(to_string(t)));
  out.push_back("tmi");
  out.push_back("position");
  return out;
}

std::vector<WordFeatures> build_features(const std::vector<Token>& tokens, const TmiLabel& tmi,
                                         const LexiconStore& lexicon,
                                         std::size_t category_count) {
  if (category_count != LexiconStore::category_count())
    throw Error(ErrorCode::DimensionMismatch,
                "feature layout expects " + std::to_string(category_count) +
                    " lexicon categories, lexicon has " +
                    std::to_string(LexiconStore::category_count()),
                "tagger");

  // Positions are normalized over the whole sentence, so the sentence length
  // is taken from the largest index rather than the (possibly gated) count.
  std::size_t last = 0;
  for (const Token& t : tokens) last = std::max(last, t.index);

  std::vector<WordFeatures> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) {
    WordFeatures w;
    w.token_index = t.index;
    w.f.assign(FeatureLayout::kDim, 0.0);
    w.f[FeatureLayout::kPosOffset + static_cast<std::size_t>(t.pos)] = 1.0;
    if (const LexiconEntry* e = lexicon.find(to_lower(t.surface))) {
      for (std::size_t c = 0; c < kLexiconCategories.size(); ++c)
        if (e->bias_types.count(kLexiconCategories[c])) w.f[FeatureLayout::kLexiconOffset + c] = 1.0;
    }
    w.f[FeatureLayout::kTmiIndex] = tmi.value == TmiValue::Tmi ? 1.0 : 0.0;
    w.f[FeatureLayout::kPositionIndex] =
        last == 0 ? 0.0 : static_cast<double>(t.index) / static_cast<double>(last);
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace epibias
