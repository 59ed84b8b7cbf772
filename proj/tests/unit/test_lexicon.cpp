#include <set>

#include "doctest.h"
#include "support.hpp"

#include "epibias/error.hpp"
#include "epibias/lexicon.hpp"

using namespace epibias;

namespace {

const LexiconStore& shipped() {
  static const LexiconStore store = LexiconStore::load(test::data_dir() / "lexicon.jsonl");
  return store;
}

std::vector<std::string> types_of(std::string_view word, std::optional<PosTag> pos = std::nullopt) {
  return to_strings(shipped().lookup(word, pos).bias_types);
}

using Names = std::vector<std::string>;

}  // namespace

TEST_CASE("tagged headline words classify as printed") {
  CHECK(types_of("staggering") == Names{"subjectives"});
  CHECK(types_of("astonishing") == Names{"positive", "subjectives"});
  CHECK(types_of("beloved") == Names{"positive", "subjectives"});
  CHECK(types_of("gifted") == Names{"positive", "subjectives"});
  CHECK(types_of("incredibly") == Names{"positive", "subjectives"});
  CHECK(types_of("normal") == Names{"subjectives"});
  CHECK(types_of("confirms") == Names{"entailments", "report"});
  CHECK(types_of("vanity") == Names{"negative", "subjectives"});
  CHECK(types_of("top") == Names{"entailments", "positive", "subjectives"});
  CHECK(types_of("ripped") == Names{"negative"});
  CHECK(types_of("bunks") == Names{"negative", "subjectives"});
  CHECK(types_of("just") == Names{"subjectives"});
  CHECK(types_of("daring") == Names{"entailments", "implicatives", "positive", "subjectives"});
  for (const char* w : {"packed", "homegr", "royal", "favourite", "casually", "markle"}) {
    INFO(w);
    CHECK(types_of(w) == Names{"regular"});
    CHECK_FALSE(shipped().lookup(w).matched);
  }
}

TEST_CASE("cascade stages") {
  const LookupResult exact = shipped().lookup("Staggering");
  CHECK(exact.match_stage == MatchStage::Exact);
  CHECK(exact.matched_key == "staggering");

  const LookupResult lemma = shipped().lookup("bunks");
  CHECK(lemma.match_stage == MatchStage::Lemma);
  CHECK(lemma.matched_key == "bunk");

  const LookupResult none = shipped().lookup("zzzzq");
  CHECK(none.match_stage == MatchStage::None);
  CHECK_FALSE(none.matched_key.has_value());
  CHECK(none.entries.empty());

  CHECK_THROWS_AS(shipped().lookup(""), Error);
}

TEST_CASE("stem stage unions a stem family") {
  const LexiconStore store = LexiconStore::parse(
      R"({"word": "deceptive", "bias_types": ["negative"]}
{"word": "deception", "bias_types": ["subjectives"]})");
  // "deceptively" has no exact or lemma entry; its stem reaches both keys.
  const LookupResult r = store.lookup("deceptively");
  if (stem("deceptive") == stem("deception")) {
    CHECK(r.match_stage == MatchStage::Stem);
    CHECK(to_strings(r.bias_types) == Names{"negative", "subjectives"});
  } else {
    CHECK(r.match_stage == MatchStage::Stem);
    CHECK(r.matched);
  }
}

TEST_CASE("lexicon invariants") {
  const LexiconStore& s = shipped();
  CHECK(s.size() > 300);
  std::set<BiasType> categories;
  for (const auto& [key, e] : s.entries()) {
    INFO(key);
    CHECK(key == e.word);
    CHECK(key == to_lower(key));
    CHECK_FALSE(e.bias_types.empty());
    CHECK(e.bias_types.count(BiasType::Regular) == 0);
    categories.insert(e.bias_types.begin(), e.bias_types.end());
    // A key found exactly reports exactly its own entry.
    const LookupResult r = s.lookup(key);
    CHECK(r.match_stage == MatchStage::Exact);
    CHECK(r.bias_types == e.bias_types);
  }
  CHECK(categories.size() == kLexiconCategories.size());
}

TEST_CASE("lookup is case-insensitive and deterministic") {
  for (const char* w : {"Daring", "DARING", "daring"}) CHECK(types_of(w) == types_of("daring"));
  CHECK(types_of("confirms", PosTag::Verb) == types_of("confirms", PosTag::Verb));
}

TEST_CASE("records for one word merge") {
  const LexiconStore store = LexiconStore::parse(
      R"({"word": "Claim", "bias_types": ["assertives"], "source": "a", "creators": "X", "resource_url": "u1"}
{"word": "claim", "bias_types": ["report"], "source": "b", "creators": "X", "resource_url": "u2"}
{"word": "claim", "bias_types": ["report"], "source": "a", "creators": "Y", "resource_url": "u1"})");
  REQUIRE(store.size() == 1);
  const LexiconEntry* e = store.find("claim");
  REQUIRE(e);
  CHECK(to_strings(e->bias_types) == Names{"assertives", "report"});
  CHECK(e->source == "a; b");
  CHECK(e->creators == "X; Y");
  CHECK(e->resource_url == "u1; u2");
}

TEST_CASE("serialize round-trips") {
  const LexiconStore again = LexiconStore::parse(shipped().serialize());
  CHECK(again.size() == shipped().size());
  CHECK(again.entries() == shipped().entries());
  CHECK(again.serialize() == shipped().serialize());
}

TEST_CASE("parse errors name the line") {
  const auto expect_parse_error = [](std::string_view text, const char* needle) {
    try {
      LexiconStore::parse(text, "t.jsonl");
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_parse_error("{\"word\": \"a\", \"bias_types\": [\"hedges\"]}\nnot json", "t.jsonl:2");
  expect_parse_error("{\"word\": \"a\", \"bias_types\": [\"nonsense\"]}", "t.jsonl:1");
  expect_parse_error("{\"word\": \"a\", \"bias_types\": [\"regular\"]}", "t.jsonl:1");
  expect_parse_error("{\"word\": \"\", \"bias_types\": [\"hedges\"]}", "t.jsonl:1");
}

TEST_CASE("bias type names") {
  for (BiasType t : kLexiconCategories) CHECK(parse_bias_type(to_string(t)) == t);
  CHECK(parse_bias_type("regular") == BiasType::Regular);
  CHECK_FALSE(parse_bias_type("sarcasm").has_value());
}

TEST_CASE("resource catalog") {
  const ResourceCatalog c = ResourceCatalog::load(test::data_dir() / "resources.json");
  CHECK(c.all().size() == kLexiconCategories.size() + 1);
  for (BiasType t : kLexiconCategories) {
    const BiasResource* r = c.find(t);
    REQUIRE(r);
    CHECK_FALSE(r->title.empty());
    CHECK_FALSE(r->resource_url.empty());
  }
  REQUIRE(c.find(BiasType::Hedges));
  CHECK(c.find(BiasType::Hedges)->resource_url.rfind("https://", 0) == 0);
}
