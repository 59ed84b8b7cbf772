#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "support.hpp"

#include "epibias/error.hpp"
#include "epibias/sentiment.hpp"

using namespace epibias;

namespace {

class ConstPolarity final : public PolarityBackend {
 public:
  explicit ConstPolarity(double v) : v_(v) {}
  double score(const std::string&) const override { return v_; }
  std::string id() const override { return "const"; }

 private:
  double v_;
};

std::shared_ptr<const LexiconStore> tiny_lexicon() {
  return std::make_shared<const LexiconStore>(LexiconStore::parse(
      R"({"word": "good", "bias_types": ["positive"]}
{"word": "awful", "bias_types": ["negative"]}
{"word": "mixed", "bias_types": ["positive", "negative"]})"));
}

}  // namespace

TEST_CASE("labels use strict thresholds") {
  CHECK(label_for_score(0.05).value == Sentiment::Neutral);
  CHECK(label_for_score(0.0500001).value == Sentiment::Positive);
  CHECK(label_for_score(-0.05).value == Sentiment::Neutral);
  CHECK(label_for_score(-0.0500001).value == Sentiment::Negative);
  CHECK(label_for_score(0.0).value == Sentiment::Neutral);
  CHECK(label_for_score(0.3, {0.5, -0.5}).value == Sentiment::Neutral);
  CHECK(label_for_score(-0.7).score == -0.7);
}

TEST_CASE("label is monotone in the score") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double a = u(rng), b = u(rng);
    const auto rank = [](Sentiment s) { return s == Sentiment::Negative ? 0 : s == Sentiment::Neutral ? 1 : 2; };
    if (a <= b) CHECK(rank(label_for_score(a).value) <= rank(label_for_score(b).value));
  }
}

TEST_CASE("classify_sentiment checks its input and the backend answer") {
  CHECK(classify_sentiment("fine", ConstPolarity(0.4)).value == Sentiment::Positive);
  CHECK_THROWS_AS(classify_sentiment("  ", ConstPolarity(0.4)), Error);
  CHECK_THROWS_AS(classify_sentiment("x", ConstPolarity(std::numeric_limits<double>::quiet_NaN())), Error);
}

TEST_CASE("sentiment names round-trip") {
  for (Sentiment s : {Sentiment::Positive, Sentiment::Neutral, Sentiment::Negative})
    CHECK(parse_sentiment(to_string(s)) == s);
  CHECK_FALSE(parse_sentiment("mixed").has_value());
}

TEST_CASE("rule polarity scorer") {
  const RulePolarityBackend rule(tiny_lexicon());
  const double alpha = 15.0;
  CHECK(rule.score("a good day") == doctest::Approx(1.0 / std::sqrt(1.0 + alpha)));
  CHECK(rule.score("an awful day") == doctest::Approx(-1.0 / std::sqrt(1.0 + alpha)));
  CHECK(rule.score("nothing here") == 0.0);
  CHECK(rule.score("a mixed bag") == 0.0);
  const double boosted = 1.293;
  CHECK(rule.score("a very good day") == doctest::Approx(boosted / std::sqrt(boosted * boosted + alpha)));
  const double negated = -0.74;
  CHECK(rule.score("not a good day") == doctest::Approx(negated / std::sqrt(negated * negated + alpha)));
  CHECK(rule.score("it isn't a good day") < 0.0);
  // Negation reaches back three words only.
  CHECK(rule.score("not one two three good") > 0.0);
  for (const char* s : {"good good good good good good", "awful awful awful awful"}) {
    const double v = rule.score(s);
    CHECK(v > -1.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("rule scorer over the shipped lexicon") {
  const auto lexicon = std::make_shared<const LexiconStore>(LexiconStore::load(test::data_dir() / "lexicon.jsonl"));
  const RulePolarityBackend rule(lexicon);
  CHECK(classify_sentiment("A beloved and admirable duchess", rule).value == Sentiment::Positive);
  CHECK(classify_sentiment("An absurd and abusive attack", rule).value == Sentiment::Negative);
  CHECK(classify_sentiment("The train leaves at noon", rule).value == Sentiment::Neutral);
}
