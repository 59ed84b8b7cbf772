#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "support.hpp"

#include "epibias/error.hpp"
#include "epibias/tagger.hpp"

using namespace epibias;

namespace {

ScorerWeights random_weights(std::mt19937_64& rng, std::size_t d_f, std::size_t d_h, std::size_t d_b) {
  std::normal_distribution<double> n(0.0, 1.0);
  ScorerWeights w;
  w.d_f = d_f;
  w.d_h = d_h;
  w.d_b = d_b;
  w.w_in.resize(d_f * d_h);
  w.w_e.resize(d_h);
  w.w_b.resize(d_b);
  for (double& x : w.w_in) x = n(rng);
  for (double& x : w.w_e) x = n(rng);
  for (double& x : w.w_b) x = n(rng);
  w.b = n(rng);
  return w;
}

// Written out from the model definition with plain loops and no shared code.
double oracle_probability(const std::vector<double>& f, const std::vector<double>& b_i,
                          const ScorerWeights& w) {
  long double z = w.b;
  for (std::size_t k = 0; k < w.d_b; ++k) z += static_cast<long double>(b_i[k]) * w.w_b[k];
  for (std::size_t j = 0; j < w.d_h; ++j) {
    long double h = 0;
    for (std::size_t r = 0; r < w.d_f; ++r) h += static_cast<long double>(f[r]) * w.w_in[r * w.d_h + j];
    if (h > 0) z += h * w.w_e[j];
  }
  return static_cast<double>(1.0L / (1.0L + std::exp(-z)));
}

}  // namespace

TEST_CASE("scorer agrees with the brute-force oracle") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::bernoulli_distribution bit(0.3);
  std::size_t instances = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const ScorerWeights w = random_weights(rng, dim(rng), dim(rng), dim(rng));
    const std::size_t words = 1 + trial % 6;
    std::vector<WordFeatures> features(words);
    std::vector<std::vector<double>> emb(words);
    for (std::size_t i = 0; i < words; ++i) {
      features[i].token_index = i;
      features[i].f.resize(w.d_f);
      for (double& x : features[i].f) x = bit(rng) ? 1.0 : u(rng);
      emb[i].resize(w.d_b);
      for (double& x : emb[i]) x = u(rng);
    }
    const std::vector<double> p = score_words(features, emb, w);
    REQUIRE(p.size() == words);
    for (std::size_t i = 0; i < words; ++i)
      CHECK(std::abs(p[i] - oracle_probability(features[i].f, emb[i], w)) <= 1e-9);
    ++instances;
  }
  CHECK(instances >= 200);
}

TEST_CASE("sigmoid stays in range and is symmetric") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-60.0, 60.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    const double s = sigmoid(x);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    CHECK(s + sigmoid(-x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sigmoid(x + 0.5) >= s);
  }
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(std::isfinite(sigmoid(-1000.0)));
  CHECK(std::isfinite(sigmoid(1000.0)));
  CHECK(sigmoid(-1000.0) >= 0.0);
  for (double p : {0.1, 0.478948, 0.5, 0.999498}) CHECK(sigmoid(logit(p)) == doctest::Approx(p).epsilon(1e-14));
}

TEST_CASE("argmax breaks ties toward the lowest index") {
  CHECK(argmax_lowest_index(std::vector<double>{0.2, 0.9, 0.9, 0.1}) == 1);
  CHECK(argmax_lowest_index(std::vector<double>{0.7, 0.7, 0.7}) == 0);
  CHECK(argmax_lowest_index(std::vector<double>{0.1}) == 0);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> level(0, 4);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> p(1 + trial % 9);
    for (double& x : p) x = level(rng) / 4.0;
    const std::size_t got = argmax_lowest_index(p);
    const double best = *std::max_element(p.begin(), p.end());
    CHECK(p[got] == best);
    for (std::size_t i = 0; i < got; ++i) CHECK(p[i] < best);
  }
}

TEST_CASE("shifting the output bias never changes the argmax") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0), shift(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    ScorerWeights w = random_weights(rng, 5, 4, 3);
    std::vector<WordFeatures> features(6);
    std::vector<std::vector<double>> emb(6);
    for (std::size_t i = 0; i < 6; ++i) {
      features[i].f.resize(5);
      for (double& x : features[i].f) x = u(rng);
      emb[i].resize(3);
      for (double& x : emb[i]) x = u(rng);
    }
    const std::size_t before = argmax_lowest_index(score_words(features, emb, w));
    w.b += shift(rng);
    CHECK(argmax_lowest_index(score_words(features, emb, w)) == before);
  }
}

TEST_CASE("probability rises with the embedding's projection on W_b") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const ScorerWeights w = random_weights(rng, 4, 3, 5);
    std::vector<double> f(4), b(5);
    for (double& x : f) x = u(rng);
    for (double& x : b) x = u(rng);
    const double p0 = sigmoid(word_logit(f, b, w));
    for (std::size_t k = 0; k < 5; ++k) b[k] += 0.1 * w.w_b[k];
    CHECK(sigmoid(word_logit(f, b, w)) >= p0);
  }
}

TEST_CASE("scorer input checks") {
  std::mt19937_64 rng(1);
  const ScorerWeights w = random_weights(rng, 3, 2, 2);
  std::vector<WordFeatures> features{{0, {1.0, 0.0, 0.0}}};
  CHECK_THROWS_AS(score_words(features, {{1.0}}, w), Error);
  CHECK_THROWS_AS(score_words(features, {}, w), Error);
  try {
    score_words(features, {{std::numeric_limits<double>::quiet_NaN(), 0.0}}, w);
    FAIL("expected NonFiniteInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteInput);
  }
  std::vector<WordFeatures> short_f{{0, {1.0}}};
  CHECK_THROWS_AS(score_words(short_f, {{0.0, 0.0}}, w), Error);
}

TEST_CASE("weights file round-trips and validates") {
  const ScorerWeights shipped = ScorerWeights::load(test::data_dir() / "weights" / "scorer_weights.json");
  CHECK(shipped.d_f == FeatureLayout::kDim);
  CHECK(shipped.feature_names == FeatureLayout::names());
  const ScorerWeights again = ScorerWeights::parse(shipped.to_json());
  CHECK(again.w_in == shipped.w_in);
  CHECK(again.w_e == shipped.w_e);
  CHECK(again.w_b == shipped.w_b);
  CHECK(again.b == shipped.b);

  ScorerWeights bad = shipped;
  bad.w_e.pop_back();
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(ScorerWeights::parse("{\"format\": \"other\"}"), Error);
  CHECK_THROWS_AS(ScorerWeights::parse("not json"), Error);
}

TEST_CASE("feature layout") {
  CHECK(FeatureLayout::kDim == 23);
  const auto names = FeatureLayout::names();
  REQUIRE(names.size() == FeatureLayout::kDim);
  CHECK(names[FeatureLayout::kTmiIndex] == "tmi");
  CHECK(names[FeatureLayout::kPositionIndex] == "position");

  const LexiconStore lexicon = LexiconStore::load(test::data_dir() / "lexicon.jsonl");
  const auto tokens = tokenize("Meghan spent a staggering sum", RulePosBackend{});
  const TmiLabel tmi{TmiValue::Tmi, 3};
  const auto f = build_features(tokens, tmi, lexicon);
  REQUIRE(f.size() == tokens.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double pos_sum = 0;
    for (std::size_t k = 0; k < kPosTagCount; ++k) pos_sum += f[i].f[k];
    CHECK(pos_sum == 1.0);
    CHECK(f[i].f[FeatureLayout::kPosOffset + static_cast<std::size_t>(tokens[i].pos)] == 1.0);
    CHECK(f[i].f[FeatureLayout::kTmiIndex] == 1.0);
    CHECK(f[i].f[FeatureLayout::kPositionIndex] == doctest::Approx(static_cast<double>(i) / (f.size() - 1)));
  }
  std::size_t subj = 0;
  for (std::size_t c = 0; c < kLexiconCategories.size(); ++c)
    if (kLexiconCategories[c] == BiasType::Subjectives) subj = c;
  CHECK(f[3].f[FeatureLayout::kLexiconOffset + subj] == 1.0);
  CHECK(f[0].f[FeatureLayout::kLexiconOffset + subj] == 0.0);
}
