#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "epibias/backends.hpp"
#include "epibias/lexicon.hpp"

namespace epibias {

enum class Sentiment { Positive, Neutral, Negative };

std::string_view to_string(Sentiment s);
std::optional<Sentiment> parse_sentiment(std::string_view name);

struct SentimentLabel {
  Sentiment value = Sentiment::Neutral;
  double score = 0.0;
};

// positive iff score > positive; negative iff score < negative.
struct SentimentThresholds {
  double positive = 0.05;
  double negative = -0.05;
};

SentimentLabel label_for_score(double score, const SentimentThresholds& thresholds = {});

// Throws Error(EmptyInput) on an empty sentence; backend errors propagate.
SentimentLabel classify_sentiment(const std::string& sentence, const PolarityBackend& backend,
                                  const SentimentThresholds& thresholds = {});

// Bundled scorer over the lexicon's positive/negative words. Each hit adds
// +1 or -1, scaled up by a preceding intensifier and flipped (damped) by a
// negator within the three previous words. The sum s is squashed to
// s / sqrt(s^2 + 15).
class RulePolarityBackend final : public PolarityBackend {
 public:
  explicit RulePolarityBackend(std::shared_ptr<const LexiconStore> lexicon)
      : lexicon_(std::move(lexicon)) {}
  double score(const std::string& sentence) const override;
  std::string id() const override { return "rule-polarity/1"; }

 private:
  std::shared_ptr<const LexiconStore> lexicon_;
};

}  // namespace epibias
