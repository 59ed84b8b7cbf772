#include <array>
#include <cmath>

#include "epibias/error.hpp"
#include "epibias/sentiment.hpp"

namespace epibias {

namespace {

constexpr std::array<std::string_view, 9> kNegators{
    "not", "no", "never", "none", "nobody", "nothing", "without", "n't", "hardly"};
constexpr std::array<std::string_view, 9> kIntensifiers{
    "very", "really", "extremely", "so", "too", "incredibly", "absolutely", "totally", "utterly"};

constexpr double kNegationScale = -0.74;
constexpr double kIntensifierBoost = 0.293;
constexpr double kAlpha = 15.0;

template <std::size_t N>
bool in(const std::array<std::string_view, N>& list, std::string_view w) {
  for (std::string_view x : list)
    if (x == w) return true;
  return false;
}

bool is_negator(std::string_view w) {
  return in(kNegators, w) || (w.size() > 3 && w.substr(w.size() - 3) == "n't");
}

}  // namespace

std::string_view to_string(Sentiment s) {
  switch (s) {
    case Sentiment::Positive: return "positive";
    case Sentiment::Neutral: return "neutral";
    case Sentiment::Negative: return "negative";
  }
  return "neutral";
}

std::optional<Sentiment> parse_sentiment(std::string_view name) {
  if (name == "positive") return Sentiment::Positive;
  if (name == "neutral") return Sentiment::Neutral;
  if (name == "negative") return Sentiment::Negative;
  return std::nullopt;
}

SentimentLabel label_for_score(double score, const SentimentThresholds& t) {
  SentimentLabel l;
  l.score = score;
  if (score > t.positive)
    l.value = Sentiment::Positive;
  else if (score < t.negative)
    l.value = Sentiment::Negative;
  else
    l.value = Sentiment::Neutral;
  return l;
}

SentimentLabel classify_sentiment(const std::string& sentence, const PolarityBackend& backend,
                                  const SentimentThresholds& thresholds) {
  if (sentence.find_first_not_of(" \t\r\n") == std::string::npos)
    throw Error(ErrorCode::EmptyInput, "sentiment: empty sentence", "sentiment");
  const double s = backend.score(sentence);
  if (!std::isfinite(s))
    throw Error(ErrorCode::NonFiniteInput, "sentiment: non-finite score", "sentiment");
  return label_for_score(s, thresholds);
}

double RulePolarityBackend::score(const std::string& sentence) const {
  std::vector<std::string> words;
  for (const SurfacePiece& p : split_surface(sentence))
    if (!p.is_punct) words.push_back(to_lower(p.text));

  double sum = 0.0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const LexiconEntry* e = lexicon_->find(words[i]);
    if (!e) continue;
    const bool pos = e->bias_types.count(BiasType::Positive) > 0;
    const bool neg = e->bias_types.count(BiasType::Negative) > 0;
    if (pos == neg) continue;
    double v = pos ? 1.0 : -1.0;
    if (i > 0 && in(kIntensifiers, words[i - 1])) v += v > 0 ? kIntensifierBoost : -kIntensifierBoost;
    for (std::size_t back = 1; back <= 3 && back <= i; ++back)
      if (is_negator(words[i - back])) {
        v *= kNegationScale;
        break;
      }
    sum += v;
  }
  return sum / std::sqrt(sum * sum + kAlpha);
}

}  // namespace epibias
