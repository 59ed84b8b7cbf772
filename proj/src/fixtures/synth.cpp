#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "epibias/error.hpp"
#include "epibias/fixtures.hpp"
#include "epibias/hashing.hpp"
#include "epibias/tagger.hpp"

namespace epibias {

namespace {

using nlohmann::json;

Error bad_spec(const std::string& msg) { return Error(ErrorCode::BadRequest, msg, "fixtures"); }

double u(std::string_view seed, const std::string& key) {
  return unit_hash(std::string(seed) + ":" + key);
}

std::optional<ScoredCandidate> candidate_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return ScoredCandidate{j.at("text").get<std::string>(), j.at("similarity").get<double>()};
}

// `n` texts from `pool`, ordered by a per-sentence hash, skipping `taken`.
std::vector<std::string> pick_fill(const std::string& sentence, const std::vector<std::string>& pool,
                                   std::size_t n, const std::set<std::string>& taken) {
  std::vector<std::pair<double, std::string>> order;
  for (const std::string& t : pool) order.emplace_back(u(sentence, "fill:" + t), t);
  std::sort(order.begin(), order.end());
  std::vector<std::string> out;
  std::set<std::string> seen = taken;
  for (const auto& [key, text] : order) {
    if (out.size() == n) break;
    if (seen.insert(normalize_text(text)).second) out.push_back(text);
  }
  return out;
}

void assign_fill(SentenceSpec& s, const std::vector<std::string>& fill_s,
                 const std::vector<std::string>& fill_c, std::size_t n_s, std::size_t n_c) {
  std::set<std::string> taken;
  if (s.top_stereotype) taken.insert(normalize_text(s.top_stereotype->text));
  if (s.top_concept) taken.insert(normalize_text(s.top_concept->text));
  if (s.top_stereotype) {
    s.fill_stereotypes = pick_fill(s.sentence, fill_s, n_s, taken);
    for (const auto& t : s.fill_stereotypes) taken.insert(normalize_text(t));
  }
  if (s.top_concept) s.fill_concepts = pick_fill(s.sentence, fill_c, n_c, taken);
}

// Per-sentence similarity of every candidate text, keyed by normalized text.
std::map<std::string, double> similarity_plan(const SentenceSpec& s) {
  std::map<std::string, double> plan;
  const auto put = [&](const std::string& text, double sim) {
    if (sim < 0.0 || sim > 1.0) throw bad_spec("similarity outside [0, 1] for '" + text + "'");
    auto [it, inserted] = plan.emplace(normalize_text(text), sim);
    if (!inserted && it->second != sim)
      throw bad_spec("'" + text + "' given two similarities in: " + s.sentence);
  };
  if (s.top_stereotype) put(s.top_stereotype->text, s.top_stereotype->similarity);
  if (s.top_concept) put(s.top_concept->text, s.top_concept->similarity);
  double tops2 = 0.0;
  for (const auto& [text, sim] : plan) tops2 += sim * sim;
  std::vector<std::string> fills;
  const auto fill = [&](const std::vector<std::string>& texts, double top, const char* kind) {
    for (const std::string& t : texts) {
      auto [it, inserted] =
          plan.emplace(normalize_text(t), top * (0.2 + 0.7 * u(s.sentence, std::string(kind) + ":" + t)));
      if (inserted) fills.push_back(it->first);
    }
  };
  if (s.top_stereotype) fill(s.fill_stereotypes, s.top_stereotype->similarity, "s");
  if (s.top_concept) fill(s.fill_concepts, s.top_concept->similarity, "c");

  // Shrink the fills when the sentence vector would leave the unit sphere;
  // the top similarities are kept exact.
  constexpr double kBudget = 0.98;
  double fills2 = 0.0;
  for (const std::string& k : fills) fills2 += plan[k] * plan[k];
  if (fills2 > 0.0 && tops2 + fills2 > kBudget) {
    const double scale = std::sqrt(std::max(0.0, kBudget - tops2) / fills2);
    for (const std::string& k : fills) plan[k] *= scale;
  }
  return plan;
}

double polarity_for(const SentenceSpec& s) {
  const double v = u(s.sentence, "polarity");
  switch (s.sentiment) {
    case Sentiment::Negative: return -(0.2 + 0.6 * v);
    case Sentiment::Positive: return 0.2 + 0.6 * v;
    case Sentiment::Neutral: break;
  }
  return (v - 0.5) * 0.08;
}

void add_token_record(FixtureSet& out, const SentenceSpec& s, const LexiconStore& lexicon,
                      const ScorerWeights& weights, const PosBackend& pos,
                      const StopWords& stopwords, const SynthesisOptions& options) {
  const std::vector<Token> tokens = tokenize(s.sentence, pos, stopwords);
  const TmiLabel tmi = tmi_label(tokens);
  const std::vector<WordFeatures> features = build_features(tokens, tmi, lexicon);
  const std::string want = to_lower(s.tagged_token ? *s.tagged_token : s.tagged);

  std::optional<std::size_t> target;
  for (std::size_t i = 0; i < tokens.size() && !target; ++i)
    if (is_scoreable(tokens[i]) && to_lower(tokens[i].surface) == want) target = i;
  if (!target) throw bad_spec("'" + want + "' is not a scored token of: " + s.sentence);
  if (s.probability <= 0.0 || s.probability >= 1.0)
    throw bad_spec("probability must lie in (0, 1): " + s.sentence);

  double wb_norm2 = 0.0;
  for (double x : weights.w_b) wb_norm2 += x * x;
  if (wb_norm2 == 0.0) throw bad_spec("w_b is zero; embeddings cannot move the score");

  const std::string key = fixture_key(s.sentence);
  TokenEmbeddingRecord rec;
  rec.model_id = options.token_model_id;
  rec.sentence = detokenize(tokens);
  rec.embeddings.model_id = options.token_model_id;
  rec.embeddings.dim = weights.d_b;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    rec.tokens.push_back(tokens[i].surface);
    std::vector<double> b(weights.d_b);
    for (std::size_t d = 0; d < weights.d_b; ++d)
      b[d] = options.noise_scale *
             (2.0 * u(key, "noise:" + std::to_string(i) + ":" + std::to_string(d)) - 1.0);
    if (is_scoreable(tokens[i])) {
      const double p = i == *target
                           ? s.probability
                           : s.probability * (0.05 + 0.85 * u(key, "p:" + std::to_string(i)));
      double noise_dot = 0.0;
      for (std::size_t d = 0; d < weights.d_b; ++d) noise_dot += b[d] * weights.w_b[d];
      const double shift =
          (logit(p) - expert_logit(features[i].f, weights) - weights.b - noise_dot) / wb_norm2;
      for (std::size_t d = 0; d < weights.d_b; ++d) b[d] += shift * weights.w_b[d];
      // Walk out the last few ulps so the replayed probability is the
      // target double itself.
      double got = sigmoid(word_logit(features[i].f, b, weights));
      for (int iter = 0; iter < 200 && got != p; ++iter) {
        const double step = (p - got) / (got * (1.0 - got)) / wb_norm2;
        const std::vector<double> before = b;
        for (std::size_t d = 0; d < weights.d_b; ++d) b[d] += step * weights.w_b[d];
        if (b == before) {
          const std::size_t d = static_cast<std::size_t>(
              std::max_element(weights.w_b.begin(), weights.w_b.end(),
                               [](double x, double y) { return std::abs(x) < std::abs(y); }) -
              weights.w_b.begin());
          const bool up = (p > got) == (weights.w_b[d] > 0);
          b[d] = std::nextafter(b[d], up ? INFINITY : -INFINITY);
        }
        got = sigmoid(word_logit(features[i].f, b, weights));
      }
      if (std::abs(got - p) > 1e-9)
        throw bad_spec("cannot reach probability " + std::to_string(p) + " for '" +
                       tokens[i].surface + "'");
    }
    rec.embeddings.vectors.push_back(std::move(b));
  }
  if (s.tagged_token) {
    rec.embeddings.pieces.assign(tokens.size(), "");
    rec.embeddings.pieces[*target] = to_lower(s.tagged);
  }
  out.add(std::move(rec));
}

// Word lists for synthetic headlines.
const std::vector<std::string> kVerbs = {
    "wears", "shows", "unveils", "debuts", "reveals", "flaunts", "chooses", "picks",
    "brings", "shares", "sports", "buys", "gifts", "hides", "praises", "defends",
    "rejects", "plans", "hosts", "celebrates"};
const std::vector<std::string> kAdjectives = {
    "staggering", "astonishing", "beloved", "daring", "lavish", "modest", "elegant",
    "controversial", "stunning", "expensive", "shocking", "humble", "bold", "secret",
    "extravagant", "charming", "awkward", "glamorous", "outrageous", "classic",
    "surprising", "brilliant", "unusual", "scandalous"};
const std::vector<std::string> kNouns = {
    "gown", "dress", "necklace", "earrings", "coat", "wedding", "speech", "portrait",
    "holiday", "interview", "bouquet", "charity", "project", "tiara", "hat", "garden",
    "kitchen", "handbag", "birthday", "tour"};
const std::vector<std::string> kTails = {
    "at royal event", "in London", "for charity gala", "during overseas tour",
    "on the red carpet", "ahead of anniversary", "at Windsor", "before Christmas"};

const std::vector<std::string> kStereotypePool = {
    "women are sex objects", "women are property", "women should dress modestly",
    "women should wear dresses", "personal spending habits", "gender hierarchy",
    "black folks want to marry rich people", "royalty housekeeping are gold diggers",
    "women are vulnerable", "sexism", "feminism", "family law"};
const std::vector<std::string> kConceptPool = {
    "misogyny", "racial hierarchy", "women are property", "gender hierarchy",
    "women should spend money on clothes", "pregnancy", "racial marriage", "sexism"};

// Fill candidates ranked under the corpus rows' top candidates.
const std::vector<std::string> kFillStereotypes = {
    "women are emotional", "women are gossips", "rich people are selfish",
    "royals are out of touch", "women are jealous of each other",
    "celebrities crave attention", "mothers should stay at home"};
const std::vector<std::string> kFillConcepts = {
    "class privilege", "celebrity culture", "body image", "motherhood", "public scrutiny"};

std::string full_name(const std::string& topic) {
  std::istringstream in(topic);
  std::string a, b;
  in >> a >> b;
  return b.empty() ? a : a + " " + b;
}

// Distinct headlines for `topic`, drawn from the word lists by hash.
std::string make_headline(const std::string& topic, std::string_view seed, const std::string& key,
                          std::set<std::string>& used, std::string* adjective) {
  for (int attempt = 0;; ++attempt) {
    const std::string k = key + ":" + std::to_string(attempt);
    const auto pick = [&](const std::vector<std::string>& v, const char* slot) -> const std::string& {
      return v[static_cast<std::size_t>(u(seed, k + slot) * static_cast<double>(v.size()))];
    };
    const std::string& adj = pick(kAdjectives, ":adj");
    std::string h = full_name(topic) + " " + pick(kVerbs, ":verb") + " " + adj + " " +
                    pick(kNouns, ":noun") + " " + pick(kTails, ":tail");
    if (used.insert(document_id(h)).second) {
      if (adjective) *adjective = adj;
      return h;
    }
  }
}

}  // namespace

std::vector<SentenceSpec> load_sentence_specs(const std::filesystem::path& path,
                                              std::size_t fill_stereotypes,
                                              std::size_t fill_concepts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string(), "fixtures");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + ex.what(), "fixtures");
  }
  try {
    std::vector<std::string> fill_s, fill_c;
    if (j.contains("fill")) {
      fill_s = j["fill"].value("stereotypes", std::vector<std::string>{});
      fill_c = j["fill"].value("concepts", std::vector<std::string>{});
    }
    std::vector<SentenceSpec> out;
    for (const json& row : j.at("rows")) {
      SentenceSpec s;
      s.sentence = row.at("headline").get<std::string>();
      if (row.contains("subject") && !row["subject"].is_null())
        s.subject = row["subject"].get<std::string>();
      s.tagged = row.at("tagged").get<std::string>();
      if (row.contains("tagged_token") && !row["tagged_token"].is_null())
        s.tagged_token = row["tagged_token"].get<std::string>();
      s.probability = row.at("probability").get<double>();
      const auto sentiment = parse_sentiment(row.at("sentiment").get<std::string>());
      if (!sentiment) throw bad_spec("unknown sentiment in row for: " + s.sentence);
      s.sentiment = *sentiment;
      s.top_stereotype = candidate_from_json(row.value("top_stereotype", json()));
      s.top_concept = candidate_from_json(row.value("top_concept", json()));
      assign_fill(s, fill_s, fill_c, fill_stereotypes, fill_concepts);
      out.push_back(std::move(s));
    }
    return out;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + ex.what(), "fixtures");
  }
}

FixtureSet synthesize_fixtures(const std::vector<SentenceSpec>& specs, const LexiconStore& lexicon,
                               const ScorerWeights& weights, const PosBackend& pos,
                               const StopWords& stopwords, const SynthesisOptions& options) {
  weights.validate();
  FixtureSet out;

  std::vector<std::map<std::string, double>> plans;
  std::map<std::string, std::string> texts;  // normalized -> as first written
  for (const SentenceSpec& s : specs) {
    plans.push_back(similarity_plan(s));
    const auto note = [&](const std::string& t) { texts.emplace(normalize_text(t), t); };
    if (s.top_stereotype) note(s.top_stereotype->text);
    if (s.top_concept) note(s.top_concept->text);
    for (const auto& t : s.fill_stereotypes) note(t);
    for (const auto& t : s.fill_concepts) note(t);
  }

  // Basis: e_0 is the residual axis, then one axis per candidate text.
  const std::size_t dim = texts.size() + 1;
  std::map<std::string, std::size_t> axis;
  for (const auto& [norm, text] : texts) {
    const std::size_t k = axis.size() + 1;
    axis.emplace(norm, k);
    std::vector<double> v(dim, 0.0);
    v[k] = 1.0;
    out.add(SentenceEmbeddingRecord{options.sentence_model_id, text, std::move(v)});
  }

  for (std::size_t n = 0; n < specs.size(); ++n) {
    const SentenceSpec& s = specs[n];
    add_token_record(out, s, lexicon, weights, pos, stopwords, options);

    std::vector<double> h(dim, 0.0);
    double sum2 = 0.0;
    for (const auto& [norm, sim] : plans[n]) {
      h[axis.at(norm)] = sim;
      sum2 += sim * sim;
    }
    if (sum2 > 1.0) throw bad_spec("similarities square-sum past 1 for: " + s.sentence);
    h[0] = std::sqrt(1.0 - sum2);
    out.add(SentenceEmbeddingRecord{options.sentence_model_id, s.sentence, std::move(h)});

    // Tops and odd-indexed fills come from CO-STAR, even-indexed fills from SBF.
    GeneratorRecord costar{GeneratorOrigin::Costar, s.sentence, {}};
    GeneratorRecord sbf{GeneratorOrigin::Sbf, s.sentence, {}};
    if (s.top_stereotype) costar.output.stereotypes.push_back(s.top_stereotype->text);
    if (s.top_concept) costar.output.concepts.push_back(s.top_concept->text);
    for (std::size_t i = 0; i < s.fill_stereotypes.size(); ++i)
      (i % 2 ? costar : sbf).output.stereotypes.push_back(s.fill_stereotypes[i]);
    for (std::size_t i = 0; i < s.fill_concepts.size(); ++i)
      (i % 2 ? costar : sbf).output.concepts.push_back(s.fill_concepts[i]);
    out.add(std::move(costar));
    out.add(std::move(sbf));

    out.add(PolarityRecord{s.sentence, polarity_for(s)});
  }
  return out;
}

ScorerWeights synthesize_weights(std::size_t d_h, std::size_t d_b, std::string_view seed) {
  ScorerWeights w;
  w.d_f = FeatureLayout::kDim;
  w.d_h = d_h;
  w.d_b = d_b;
  w.feature_names = FeatureLayout::names();
  const auto sym = [&](const std::string& key, double scale) { return scale * (2.0 * u(seed, key) - 1.0); };
  for (std::size_t r = 0; r < w.d_f; ++r)
    for (std::size_t c = 0; c < d_h; ++c)
      w.w_in.push_back(sym("w_in:" + std::to_string(r) + ":" + std::to_string(c), 0.6));
  for (std::size_t c = 0; c < d_h; ++c) w.w_e.push_back(sym("w_e:" + std::to_string(c), 0.8));
  for (std::size_t d = 0; d < d_b; ++d) w.w_b.push_back(sym("w_b:" + std::to_string(d), 0.5));
  w.b = -0.5;
  w.validate();
  return w;
}

SyntheticCorpus synthesize_corpus(std::size_t n_documents, const std::vector<std::string>& topics,
                                  TimePoint now, int max_age_days, std::string_view seed) {
  if (topics.empty()) throw bad_spec("no topics");
  if (max_age_days <= 0) throw bad_spec("max_age_days must be positive");
  SyntheticCorpus out;
  std::set<std::string> used;
  const long long window = static_cast<long long>(max_age_days) * 86400 - 1;
  for (std::size_t i = 0; i < n_documents; ++i) {
    const std::string& topic = topics[i % topics.size()];
    const std::string key = "doc:" + std::to_string(i);
    std::string adjective;
    Document d;
    d.headline = make_headline(topic, seed, key, used, &adjective);
    d.id = document_id(d.headline);
    d.subject = subject_from_topic(topic);
    d.topic = topic;
    d.source_url = "https://news.example.org/" + d.id;
    d.published_at = now - std::chrono::seconds(static_cast<long long>(u(seed, key + ":age") *
                                                                       static_cast<double>(window)));
    d.fetched_at = now;

    SentenceSpec s;
    s.sentence = d.headline;
    s.subject = d.subject;
    s.tagged = adjective;
    s.probability = 0.55 + 0.44 * u(seed, key + ":p");
    const double sv = u(seed, key + ":sentiment");
    s.sentiment = sv < 0.4 ? Sentiment::Negative : sv < 0.75 ? Sentiment::Neutral : Sentiment::Positive;
    const auto pick = [&](const std::vector<std::string>& pool, const char* slot) {
      return ScoredCandidate{
          pool[static_cast<std::size_t>(u(seed, key + slot) * static_cast<double>(pool.size()))],
          0.05 + 0.45 * u(seed, key + slot + ":sim")};
    };
    s.top_stereotype = pick(kStereotypePool, ":s");
    s.top_concept = pick(kConceptPool, ":c");
    if (normalize_text(s.top_concept->text) == normalize_text(s.top_stereotype->text))
      s.top_concept->similarity = s.top_stereotype->similarity;
    assign_fill(s, kFillStereotypes, kFillConcepts, 3, 2);

    out.documents.push_back(std::move(d));
    out.specs.push_back(std::move(s));
  }
  return out;
}

MockSearchClient synthesize_search_responses(const std::vector<std::string>& topics,
                                             std::size_t per_topic, TimePoint now,
                                             int max_age_days, std::string_view seed) {
  std::map<std::string, MockSearchClient::Response> responses;
  std::set<std::string> used;
  std::vector<SearchResult> first_topic;
  for (std::size_t t = 0; t < topics.size(); ++t) {
    MockSearchClient::Response r;
    for (std::size_t j = 0; j < per_topic; ++j) {
      const std::string key = "search:" + std::to_string(t) + ":" + std::to_string(j);
      SearchResult item;
      if (t > 0 && j % 10 == 9 && j < first_topic.size()) {
        item = first_topic[j];  // the same story surfacing under another topic
      } else {
        item.headline = make_headline(topics[t], seed, key, used, nullptr);
        item.url = "https://news.example.org/" + document_id(item.headline);
        const bool stale = j % 8 == 7;
        const double days = stale ? max_age_days + 1 + 10 * u(seed, key + ":age")
                                  : (max_age_days - 1) * u(seed, key + ":age");
        item.published_at = now - std::chrono::seconds(static_cast<long long>(days * 86400));
      }
      r.results.push_back(item);
    }
    if (t == 0) first_topic = r.results;
    responses.emplace(topics[t], std::move(r));
  }
  return MockSearchClient(now, std::move(responses));
}

}  // namespace epibias
