#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "epibias/error.hpp"
#include "epibias/report_json.hpp"

using namespace epibias;

namespace {

class DownEmbeddings final : public EmbeddingBackend {
 public:
  TokenEmbeddings embed_tokens(const std::string&, const std::string&,
                               const std::vector<std::string>&) const override {
    throw Error(ErrorCode::BackendUnavailable, "embedding service down", "stub");
  }
  std::vector<double> embed_sentence(const std::string&, const std::string&) const override {
    throw Error(ErrorCode::BackendUnavailable, "embedding service down", "stub");
  }
  std::string id() const override { return "down"; }
};

class DownPolarity final : public PolarityBackend {
 public:
  double score(const std::string&) const override {
    throw Error(ErrorCode::BackendUnavailable, "polarity service down", "stub");
  }
  std::string id() const override { return "down"; }
};

StereotypeCandidate stereotype(std::string text, double sim) {
  return {std::move(text), CandidateKind::Stereotype, GeneratorOrigin::Costar, sim, 1};
}

LookupResult lookup_of(BiasTypeSet types) {
  LookupResult r;
  r.matched = !types.count(BiasType::Regular);
  r.match_stage = r.matched ? MatchStage::Exact : MatchStage::None;
  r.bias_types = std::move(types);
  return r;
}

AnalysisReport fake_report(const std::string& subject, Sentiment s, BiasTypeSet types) {
  AnalysisReport r;
  r.sentence = subject + " sentence";
  r.subject = subject;
  r.sentiment.value = s;
  r.lookup = lookup_of(std::move(types));
  return r;
}

std::vector<AnalysisReport> golden_reports() {
  std::ifstream in(test::golden_dir() / "reports.jsonl");
  std::stringstream buf;
  buf << in.rdbuf();
  return reports_from_jsonl(buf.str());
}

}  // namespace

TEST_CASE("testimonial flag") {
  const RulesConfig rules;
  TaggedWord t;
  t.probability = 0.6;
  const std::vector<StereotypeCandidate> ranked{stereotype("women are sexual objects", 0.35)};
  const RelevanceVerdict relevant = select_relevant(ranked, 0.3);
  const SentimentLabel neutral{Sentiment::Neutral, 0.0};

  CHECK(derive_flags(t, lookup_of({BiasType::Subjectives}), relevant, ranked, neutral, rules).testimonial);
  CHECK(derive_flags(t, lookup_of({BiasType::Hedges}), relevant, ranked, neutral, rules).testimonial);
  CHECK_FALSE(derive_flags(t, lookup_of({BiasType::Report}), relevant, ranked, neutral, rules).testimonial);
  CHECK_FALSE(derive_flags(t, lookup_of({BiasType::Regular}), relevant, ranked, neutral, rules).testimonial);

  t.probability = 0.5;
  CHECK(derive_flags(t, lookup_of({BiasType::Negative}), relevant, ranked, neutral, rules).testimonial);
  t.probability = 0.4999;
  CHECK_FALSE(derive_flags(t, lookup_of({BiasType::Negative}), relevant, ranked, neutral, rules).testimonial);

  t.probability = 0.9;
  const std::vector<StereotypeCandidate> weak{stereotype("women are sexual objects", 0.2602)};
  CHECK_FALSE(derive_flags(t, lookup_of({BiasType::Subjectives}), select_relevant(weak, 0.3), weak, neutral, rules)
                  .testimonial);
}

TEST_CASE("character flag") {
  const RulesConfig rules;
  TaggedWord t;
  t.probability = 0.99;
  const SentimentLabel negative{Sentiment::Negative, -0.4}, positive{Sentiment::Positive, 0.4};
  const std::vector<StereotypeCandidate> ranked{stereotype("Personal Spending Habits", 0.34),
                                                stereotype("other", 0.33)};
  const RelevanceVerdict v = select_relevant(ranked, 0.3);
  const InjusticeFlags f = derive_flags(t, lookup_of({BiasType::Subjectives}), v, ranked, negative, rules);
  CHECK(f.character);
  bool cited = false;
  for (const auto& why : f.rationale) cited |= why.rfind(rules.character_id, 0) == 0;
  CHECK(cited);
  CHECK_FALSE(derive_flags(t, lookup_of({BiasType::Subjectives}), v, ranked, positive, rules).character);

  // A matching stereotype that is not the top one still counts when above the threshold.
  const std::vector<StereotypeCandidate> second{stereotype("other", 0.5), stereotype("spending habits of royals", 0.31)};
  CHECK(derive_flags(t, lookup_of({BiasType::Regular}), select_relevant(second, 0.3), second, negative, rules).character);
  const std::vector<StereotypeCandidate> below{stereotype("other", 0.5), stereotype("spending habits", 0.29)};
  CHECK_FALSE(
      derive_flags(t, lookup_of({BiasType::Regular}), select_relevant(below, 0.3), below, negative, rules).character);
}

TEST_CASE("framing evidence flag") {
  const RulesConfig rules;
  TaggedWord t;
  t.probability = 0.1;
  const RelevanceVerdict none;
  for (Sentiment s : {Sentiment::Positive, Sentiment::Negative}) {
    CHECK(derive_flags(t, lookup_of({BiasType::Report}), none, {}, {s, 0.0}, rules).framing_evidence);
    CHECK_FALSE(derive_flags(t, lookup_of({BiasType::Regular}), none, {}, {s, 0.0}, rules).framing_evidence);
  }
  CHECK_FALSE(derive_flags(t, lookup_of({BiasType::Report}), none, {}, {Sentiment::Neutral, 0.0}, rules)
                  .framing_evidence);
}

TEST_CASE("rules file") {
  const RulesConfig shipped = RulesConfig::load(test::data_dir() / "rules.json");
  CHECK(shipped.testimonial_p_min == 0.5);
  CHECK(shipped.personal_attribute_patterns == std::vector<std::string>{"spending habits"});
  const RulesConfig custom = RulesConfig::parse(
      R"({"version": "v2", "testimonial": {"p_min": 0.8, "bias_types": ["hedges"]}, "character": {"sentiment": "positive"}})");
  CHECK(custom.version == "v2");
  CHECK(custom.testimonial_p_min == 0.8);
  CHECK(custom.testimonial_types == BiasTypeSet{BiasType::Hedges});
  CHECK(custom.character_sentiment == Sentiment::Positive);
  CHECK_THROWS_AS(RulesConfig::parse(R"({"testimonial": {"bias_types": ["bogus"]}})"), Error);
  CHECK_THROWS_AS(RulesConfig::parse("{"), Error);
}

TEST_CASE("context gate") {
  const auto gate = [](const char* s) { return context_gate(tokenize(s, RulePosBackend{})); };
  CHECK_THROWS_AS(gate("Meghan smiled"), Error);
  CHECK_THROWS_AS(gate("Hi there"), Error);
  CHECK_THROWS_AS(gate("It is what it is!"), Error);
  const GateResult ok = gate("Kate wore a red dress");
  CHECK(ok.passed);
  CHECK(ok.content_words == 4);
  CHECK(ok.token_count == 5);
  try {
    gate("The cat sat");
    FAIL("expected NotEnoughContext");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotEnoughContext);
    CHECK(e.stage() == "gate");
  }
}

TEST_CASE("pipeline on a shipped headline") {
  const Engine& engine = *test::golden_engine();
  const AnalysisReport r = analyze_sentence(
      "Meghan Markle spent a staggering £38,000 on her clothes for a charity trip", std::string("Meghan"), engine);
  CHECK(r.tagged.surface == "staggering");
  CHECK(r.tagged.token_surface == "staggering");
  CHECK(r.sentence.compare(r.tagged.offset, r.tagged.token_surface.size(), r.tagged.token_surface) == 0);
  CHECK(r.stage_trace == std::vector<std::string>{"gate", "tag", "lookup", "stereotype_rank", "sentiment", "flags"});
  CHECK(r.flags.testimonial);
  CHECK(r.flags.character);
  CHECK(r.flags.framing_evidence);
  REQUIRE(r.explanations.size() == 1);
  CHECK(r.explanations[0].bias_type == BiasType::Subjectives);
  CHECK_FALSE(r.explanations[0].resource_url.empty());
  for (const ScoredWord& w : r.tagged.scores) CHECK(w.probability <= r.tagged.probability);
  CHECK(r.config_snapshot.rules_version == "default-1");
}

TEST_CASE("pipeline is deterministic in fixture mode") {
  const Engine& engine = *test::golden_engine();
  const std::string s = "Kate Middleton Wore a Bardot Dress to the 'Top Gun' Premiere";
  CHECK(to_json(analyze_sentence(s, std::nullopt, engine)).dump() ==
        to_json(analyze_sentence(s, std::nullopt, engine)).dump());
}

TEST_CASE("errors carry the failing stage") {
  const Engine& golden = *test::golden_engine();
  const std::string headline = "Duchess Kate reveals her favourite photo of son Prince Louis";

  const auto expect = [&](const Engine& e, const std::string& text, ErrorCode code, const char* stage) {
    try {
      analyze_sentence(text, std::nullopt, e);
      FAIL("expected an error");
    } catch (const Error& err) {
      CHECK(err.code() == code);
      CHECK(err.stage() == stage);
    }
  };
  expect(golden, "", ErrorCode::EmptyInput, "gate");
  expect(golden, "Meghan smiled", ErrorCode::NotEnoughContext, "gate");
  expect(golden, "An unseen sentence about nothing in particular", ErrorCode::BackendUnavailable, "tag");

  Engine down = golden;
  down.embeddings = std::make_shared<DownEmbeddings>();
  expect(down, headline, ErrorCode::BackendUnavailable, "tag");

  Engine no_polarity = golden;
  no_polarity.polarity = std::make_shared<DownPolarity>();
  expect(no_polarity, headline, ErrorCode::BackendUnavailable, "sentiment");
}

TEST_CASE("breakdown counts (report, bias type) pairs") {
  const std::vector<AnalysisReport> reports{
      fake_report("Kate", Sentiment::Positive, {BiasType::Positive, BiasType::Subjectives}),
      fake_report("Meghan", Sentiment::Negative, {BiasType::Negative}),
      fake_report("Meghan", Sentiment::Negative, {BiasType::Regular}),
      fake_report("Kate", Sentiment::Negative, {BiasType::Subjectives}),
  };
  const ComparativeBreakdown b = comparative_breakdown(reports);
  CHECK(b.root.count == 5);
  CHECK(b.root.reports == 4);
  REQUIRE(b.root.children.size() == 2);  // no neutral bucket
  CHECK(b.root.children[0].name == "positive");
  CHECK(b.root.children[1].name == "negative");
  const BreakdownNode* neg = b.bucket(Sentiment::Negative);
  REQUIRE(neg);
  CHECK(neg->count == 3);
  CHECK(neg->share == doctest::Approx(0.6));
  REQUIRE(neg->children.size() == 2);
  CHECK(neg->children[0].name == "Kate");
  CHECK(neg->child("Meghan")->count == 2);
  CHECK(neg->child("Meghan")->child("regular")->count == 1);
  CHECK(neg->child("Meghan")->share == doctest::Approx(2.0 / 3.0));
  CHECK(b.subjects() == std::vector<std::string>{"Kate", "Meghan"});
  CHECK(b.bucket(Sentiment::Neutral) == nullptr);

  const FramingDivergence d = framing_divergence(b, "Meghan", "Kate");
  REQUIRE(d.rows.size() == 3);
  CHECK(d.rows[0].share_a == 0.0);
  CHECK(d.rows[0].share_b == doctest::Approx(2.0 / 3.0));
  CHECK(d.rows[0].divergent);
  CHECK(d.rows[1].count_a == 0);
  CHECK_FALSE(d.rows[1].divergent);
  CHECK(d.rows[2].share_a == 1.0);
  CHECK(d.rows[2].divergent);

  CHECK_THROWS_AS(framing_divergence(b, "Meghan", "Harry"), Error);
  AnalysisReport orphan = reports[0];
  orphan.subject.reset();
  CHECK_THROWS_AS(comparative_breakdown({orphan}), Error);
  CHECK(comparative_breakdown({}).root.children.empty());
}

TEST_CASE("breakdown shares sum to one and ignore report order") {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> pick(0, 2), type(0, static_cast<int>(kLexiconCategories.size()));
  std::vector<AnalysisReport> reports;
  for (int i = 0; i < 120; ++i) {
    BiasTypeSet types;
    const int t = type(rng);
    if (t == static_cast<int>(kLexiconCategories.size()))
      types.insert(BiasType::Regular);
    else
      types.insert(kLexiconCategories[static_cast<std::size_t>(t)]);
    if (i % 3 == 0) types.insert(BiasType::Subjectives), types.erase(BiasType::Regular);
    reports.push_back(fake_report(i % 2 ? "Kate" : "Meghan", static_cast<Sentiment>(pick(rng)), types));
  }
  const ComparativeBreakdown b = comparative_breakdown(reports);
  const auto check_node = [](const BreakdownNode& n, auto&& self) -> void {
    if (n.children.empty()) return;
    double sum = 0;
    std::size_t count = 0;
    for (const auto& c : n.children) {
      sum += c.share;
      count += c.count;
      self(c, self);
    }
    CHECK(sum == doctest::Approx(1.0));
    CHECK(count == n.count);
  };
  check_node(b.root, check_node);
  std::shuffle(reports.begin(), reports.end(), rng);
  CHECK(to_json(comparative_breakdown(reports)).dump() == to_json(b).dump());
}

TEST_CASE("report JSON round-trips") {
  for (const AnalysisReport& r : golden_reports()) {
    const nlohmann::json j = to_json(r);
    CHECK(to_json(report_from_json(j)).dump() == j.dump());
  }
  CHECK_THROWS_AS(reports_from_jsonl("{\"sentence\": 1}\n"), Error);
  CHECK(reports_from_jsonl("\n  \n").empty());
}

TEST_CASE("batch keeps input order and collects failures") {
  const Engine& engine = *test::golden_engine();
  std::vector<SentenceInput> inputs{
      {"Duchess Kate reveals her favourite photo of son Prince Louis", std::string("Kate")},
      {"Hi there", std::nullopt},
      {"Kate Middleton Wore a Bardot Dress to the 'Top Gun' Premiere", std::string("Kate")},
  };
  const BatchOutcome out = analyze_batch(inputs, engine, 3);
  REQUIRE(out.reports.size() == 2);
  CHECK(out.reports[0].tagged.surface == "favourite");
  CHECK(out.reports[1].tagged.surface == "top");
  REQUIRE(out.failures.size() == 1);
  CHECK(out.failures[0].index == 1);
  CHECK(out.failures[0].error.code() == ErrorCode::NotEnoughContext);
  CHECK(analyze_batch({}, engine, 4).reports.empty());
}

TEST_CASE("pretty text marks the tagged word") {
  const Engine& engine = *test::golden_engine();
  const AnalysisReport r =
      analyze_sentence("Kate Middleton Wore a Bardot Dress to the 'Top Gun' Premiere", std::nullopt, engine);
  const std::string text = to_pretty_text(r);
  CHECK(text.find("'[[Top]] Gun'") != std::string::npos);
  CHECK(text.find("0.933422") != std::string::npos);
}
