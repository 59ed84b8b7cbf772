#include <iomanip>
#include <sstream>

#include "epibias/error.hpp"
#include "epibias/report_json.hpp"

namespace epibias {

namespace {

using nlohmann::json;

BiasTypeSet bias_types_from(const json& j) {
  BiasTypeSet out;
  for (const auto& name : j.get<std::vector<std::string>>()) {
    const auto t = parse_bias_type(name);
    if (!t) throw Error(ErrorCode::ParseError, "unknown bias type " + name, "report");
    out.insert(*t);
  }
  return out;
}

MatchStage stage_from(const std::string& s) {
  for (MatchStage m : {MatchStage::Exact, MatchStage::Lemma, MatchStage::Stem, MatchStage::None})
    if (to_string(m) == s) return m;
  throw Error(ErrorCode::ParseError, "unknown match stage " + s, "report");
}

json entry_json(const LexiconEntry& e) {
  return {{"word", e.word},
          {"bias_types", to_strings(e.bias_types)},
          {"source", e.source},
          {"creators", e.creators},
          {"resource_url", e.resource_url}};
}

LexiconEntry entry_from(const json& j) {
  LexiconEntry e;
  e.word = j.at("word").get<std::string>();
  e.bias_types = bias_types_from(j.at("bias_types"));
  e.source = j.value("source", "");
  e.creators = j.value("creators", "");
  e.resource_url = j.value("resource_url", "");
  return e;
}

StereotypeCandidate candidate_from(const json& j) {
  StereotypeCandidate c;
  c.text = j.at("text").get<std::string>();
  c.kind = j.at("kind").get<std::string>() == "concept" ? CandidateKind::Concept
                                                        : CandidateKind::Stereotype;
  const auto origin = parse_generator_origin(j.at("origin").get<std::string>());
  if (!origin) throw Error(ErrorCode::ParseError, "unknown candidate origin", "report");
  c.origin = *origin;
  c.similarity = j.at("similarity").get<double>();
  c.rank = j.at("rank").get<int>();
  return c;
}

json optional_candidate(const std::optional<StereotypeCandidate>& c) {
  return c ? to_json(*c) : json(nullptr);
}

}  // namespace

json to_json(const LookupResult& r) {
  json entries = json::array();
  for (const LexiconEntry& e : r.entries) entries.push_back(entry_json(e));
  return {{"matched", r.matched},
          {"matched_key", r.matched_key ? json(*r.matched_key) : json(nullptr)},
          {"match_stage", to_string(r.match_stage)},
          {"bias_types", to_strings(r.bias_types)},
          {"entries", entries}};
}

json to_json(const TaggedWord& t) {
  json scores = json::array();
  for (const ScoredWord& s : t.scores)
    scores.push_back({{"token_index", s.token_index}, {"surface", s.surface}, {"probability", s.probability}});
  return {{"surface", t.surface},
          {"token_surface", t.token_surface},
          {"token_index", t.token_index},
          {"offset", t.offset},
          {"probability", t.probability},
          {"bias_types", to_strings(t.bias_types)},
          {"in_lexicon", t.in_lexicon},
          {"scores", scores}};
}

json to_json(const StereotypeCandidate& c) {
  return {{"text", c.text},
          {"kind", to_string(c.kind)},
          {"origin", std::string(to_string(c.origin)) + "_backend"},
          {"similarity", c.similarity},
          {"rank", c.rank}};
}

json to_json(const RelevanceVerdict& v) {
  return {{"top_stereotype", optional_candidate(v.top_stereotype)},
          {"top_concept", optional_candidate(v.top_concept)},
          {"relevant", v.relevant},
          {"threshold", v.threshold}};
}

json to_json(const AnalysisReport& r) {
  json candidates = json::array();
  for (const auto& c : r.candidates) candidates.push_back(to_json(c));
  json explanations = json::array();
  for (const auto& e : r.explanations)
    explanations.push_back(
        {{"bias_type", to_string(e.bias_type)}, {"title", e.title}, {"resource_url", e.resource_url}});
  const ConfigSnapshot& s = r.config_snapshot;
  return {
      {"sentence", r.sentence},
      {"subject", r.subject ? json(*r.subject) : json(nullptr)},
      {"gate",
       {{"token_count", r.gate.token_count},
        {"content_words", r.gate.content_words},
        {"passed", r.gate.passed}}},
      {"tagged", to_json(r.tagged)},
      {"tmi", {{"value", to_string(r.tmi.value)}, {"descriptor_count", r.tmi.descriptor_count}}},
      {"lookup", to_json(r.lookup)},
      {"candidates", candidates},
      {"verdict", to_json(r.verdict)},
      {"sentiment", {{"value", to_string(r.sentiment.value)}, {"score", r.sentiment.score}}},
      {"flags",
       {{"testimonial", r.flags.testimonial},
        {"character", r.flags.character},
        {"framing_evidence", r.flags.framing_evidence},
        {"rationale", r.flags.rationale}}},
      {"explanations", explanations},
      {"config_snapshot",
       {{"pos_backend", s.pos_backend},
        {"embedding_backend", s.embedding_backend},
        {"generator_backends", s.generator_backends},
        {"polarity_backend", s.polarity_backend},
        {"token_model_id", s.token_model_id},
        {"sentence_model_id", s.sentence_model_id},
        {"relevance_threshold", s.relevance_threshold},
        {"sentiment_positive", s.sentiment.positive},
        {"sentiment_negative", s.sentiment.negative},
        {"rules_version", s.rules_version},
        {"min_context_words", s.min_context_words}}},
      {"stage_trace", r.stage_trace},
  };
}

AnalysisReport report_from_json(const json& j) {
  try {
    AnalysisReport r;
    r.sentence = j.at("sentence").get<std::string>();
    if (!j.at("subject").is_null()) r.subject = j["subject"].get<std::string>();

    const json& g = j.at("gate");
    r.gate.token_count = g.at("token_count").get<std::size_t>();
    r.gate.content_words = g.at("content_words").get<std::size_t>();
    r.gate.passed = g.at("passed").get<bool>();

    const json& t = j.at("tagged");
    r.tagged.surface = t.at("surface").get<std::string>();
    r.tagged.token_surface = t.value("token_surface", r.tagged.surface);
    r.tagged.token_index = t.at("token_index").get<std::size_t>();
    r.tagged.offset = t.value("offset", std::size_t{0});
    r.tagged.probability = t.at("probability").get<double>();
    r.tagged.bias_types = bias_types_from(t.at("bias_types"));
    r.tagged.in_lexicon = t.at("in_lexicon").get<bool>();
    for (const json& s : t.value("scores", json::array()))
      r.tagged.scores.push_back({s.at("token_index").get<std::size_t>(),
                                 s.at("surface").get<std::string>(),
                                 s.at("probability").get<double>()});

    const json& tmi = j.at("tmi");
    r.tmi.value = tmi.at("value").get<std::string>() == "tmi" ? TmiValue::Tmi : TmiValue::NoTmi;
    r.tmi.descriptor_count = tmi.at("descriptor_count").get<std::size_t>();

    const json& l = j.at("lookup");
    r.lookup.matched = l.at("matched").get<bool>();
    if (!l.at("matched_key").is_null()) r.lookup.matched_key = l["matched_key"].get<std::string>();
    r.lookup.match_stage = stage_from(l.at("match_stage").get<std::string>());
    r.lookup.bias_types = bias_types_from(l.at("bias_types"));
    for (const json& e : l.value("entries", json::array())) r.lookup.entries.push_back(entry_from(e));

    for (const json& c : j.value("candidates", json::array()))
      r.candidates.push_back(candidate_from(c));

    const json& v = j.at("verdict");
    if (!v.at("top_stereotype").is_null()) r.verdict.top_stereotype = candidate_from(v["top_stereotype"]);
    if (!v.at("top_concept").is_null()) r.verdict.top_concept = candidate_from(v["top_concept"]);
    r.verdict.relevant = v.at("relevant").get<bool>();
    r.verdict.threshold = v.at("threshold").get<double>();

    const json& s = j.at("sentiment");
    const auto value = parse_sentiment(s.at("value").get<std::string>());
    if (!value) throw Error(ErrorCode::ParseError, "unknown sentiment", "report");
    r.sentiment.value = *value;
    r.sentiment.score = s.at("score").get<double>();

    const json& f = j.at("flags");
    r.flags.testimonial = f.at("testimonial").get<bool>();
    r.flags.character = f.at("character").get<bool>();
    r.flags.framing_evidence = f.at("framing_evidence").get<bool>();
    r.flags.rationale = f.value("rationale", std::vector<std::string>{});

    for (const json& e : j.value("explanations", json::array())) {
      Explanation ex;
      const auto type = parse_bias_type(e.at("bias_type").get<std::string>());
      if (!type) throw Error(ErrorCode::ParseError, "unknown explanation bias type", "report");
      ex.bias_type = *type;
      ex.title = e.value("title", "");
      ex.resource_url = e.value("resource_url", "");
      r.explanations.push_back(std::move(ex));
    }

    if (j.contains("config_snapshot")) {
      const json& c = j["config_snapshot"];
      ConfigSnapshot& cs = r.config_snapshot;
      cs.pos_backend = c.value("pos_backend", "");
      cs.embedding_backend = c.value("embedding_backend", "");
      cs.generator_backends = c.value("generator_backends", std::vector<std::string>{});
      cs.polarity_backend = c.value("polarity_backend", "");
      cs.token_model_id = c.value("token_model_id", "");
      cs.sentence_model_id = c.value("sentence_model_id", "");
      cs.relevance_threshold = c.value("relevance_threshold", 0.3);
      cs.sentiment.positive = c.value("sentiment_positive", 0.05);
      cs.sentiment.negative = c.value("sentiment_negative", -0.05);
      cs.rules_version = c.value("rules_version", "");
      cs.min_context_words = c.value("min_context_words", kMinContextWords);
    }
    r.stage_trace = j.value("stage_trace", std::vector<std::string>{});
    return r;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + ex.what(), "report");
  }
}

json to_json(const BreakdownNode& n) {
  json children = json::array();
  for (const BreakdownNode& c : n.children) children.push_back(to_json(c));
  return {{"name", n.name},
          {"count", n.count},
          {"reports", n.reports},
          {"share", n.share},
          {"children", children}};
}

json to_json(const ComparativeBreakdown& b) { return to_json(b.root); }

json to_json(const FramingDivergence& d) {
  json rows = json::array();
  for (const DivergenceRow& r : d.rows)
    rows.push_back({{"sentiment", to_string(r.sentiment)},
                    {"count_a", r.count_a},
                    {"count_b", r.count_b},
                    {"share_a", r.share_a},
                    {"share_b", r.share_b},
                    {"divergent", r.divergent}});
  return {{"subject_a", d.subject_a}, {"subject_b", d.subject_b}, {"margin", d.margin}, {"rows", rows}};
}

json to_json(const BiasResource& r) {
  return {{"bias_type", to_string(r.type)},
          {"title", r.title},
          {"description", r.description},
          {"resource_url", r.resource_url}};
}

std::string to_jsonl(const std::vector<AnalysisReport>& reports) {
  std::string out;
  for (const AnalysisReport& r : reports) {
    out += to_json(r).dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<AnalysisReport> reports_from_jsonl(std::string_view text) {
  std::vector<AnalysisReport> out;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(report_from_json(json::parse(line)));
    } catch (const json::parse_error& ex) {
      throw Error(ErrorCode::ParseError, "reports line " + std::to_string(line_no) + ": " + ex.what(),
                  "report");
    } catch (const Error& ex) {
      throw Error(ErrorCode::ParseError, "reports line " + std::to_string(line_no) + ": " + ex.what(),
                  "report");
    }
  }
  return out;
}

json breakdown_document(const std::vector<AnalysisReport>& reports, const std::string& subject_a,
                        const std::string& subject_b, double margin) {
  const ComparativeBreakdown b = comparative_breakdown(reports);
  return {{"reports", reports.size()},
          {"breakdown", to_json(b)},
          {"framing_divergence", to_json(framing_divergence(b, subject_a, subject_b, margin))}};
}

std::string to_pretty_text(const AnalysisReport& r) {
  std::ostringstream out;
  out << std::setprecision(6) << std::fixed;
  const TaggedWord& t = r.tagged;
  std::string marked = r.sentence;
  if (t.offset + t.token_surface.size() <= marked.size() &&
      marked.compare(t.offset, t.token_surface.size(), t.token_surface) == 0) {
    marked.insert(t.offset + t.token_surface.size(), "]]");
    marked.insert(t.offset, "[[");
  }
  out << marked << "\n";
  if (r.subject) out << "subject:    " << *r.subject << "\n";
  out << "tagged:     " << t.surface << "  p=" << t.probability
      << (t.in_lexicon ? "  (in lexicon)" : "  (not in lexicon)") << "\n";
  out << "bias types: ";
  const auto types = to_strings(r.lookup.bias_types);
  for (std::size_t i = 0; i < types.size(); ++i) out << (i ? ", " : "") << types[i];
  out << "  [" << to_string(r.lookup.match_stage) << "]\n";
  out << "tmi:        " << to_string(r.tmi.value) << " (" << r.tmi.descriptor_count
      << " descriptors)\n";
  out << "sentiment:  " << to_string(r.sentiment.value) << " (" << r.sentiment.score << ")\n";
  out << std::setprecision(4);
  const auto top = [&](const char* label, const std::optional<StereotypeCandidate>& c) {
    out << label;
    if (c)
      out << c->text << " (" << c->similarity << ")\n";
    else
      out << "none\n";
  };
  top("stereotype: ", r.verdict.top_stereotype);
  top("concept:    ", r.verdict.top_concept);
  out << "relevant:   " << (r.verdict.relevant ? "yes" : "no") << " (threshold "
      << r.verdict.threshold << ")\n";
  out << "flags:      testimonial=" << (r.flags.testimonial ? "yes" : "no")
      << " character=" << (r.flags.character ? "yes" : "no")
      << " framing=" << (r.flags.framing_evidence ? "yes" : "no") << "\n";
  for (const std::string& why : r.flags.rationale) out << "  - " << why << "\n";
  for (const Explanation& e : r.explanations) {
    out << "  " << to_string(e.bias_type) << ": " << e.title;
    if (!e.resource_url.empty()) out << " <" << e.resource_url << ">";
    out << "\n";
  }
  return out.str();
}

}  // namespace epibias
