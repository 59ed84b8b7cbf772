#include <fstream>
#include <sstream>

#include "json.hpp"

#include "epibias/analysis.hpp"
#include "epibias/error.hpp"

namespace epibias {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  std::ostringstream s;
  s.precision(6);
  s << std::fixed << v;
  return s.str();
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

}  // namespace

RulesConfig RulesConfig::parse(std::string_view text) {
  RulesConfig r;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw Error(ErrorCode::ConfigError, std::string("rules: ") + ex.what(), "flags");
  }
  try {
    r.version = j.value("version", r.version);
    if (j.contains("testimonial")) {
      const json& t = j["testimonial"];
      r.testimonial_id = t.value("id", r.testimonial_id);
      r.testimonial_p_min = t.value("p_min", r.testimonial_p_min);
      if (t.contains("bias_types")) {
        r.testimonial_types.clear();
        for (const auto& name : t["bias_types"].get<std::vector<std::string>>()) {
          const auto type = parse_bias_type(name);
          if (!type) throw Error(ErrorCode::ConfigError, "rules: unknown bias type " + name, "flags");
          r.testimonial_types.insert(*type);
        }
      }
    }
    if (j.contains("character")) {
      const json& c = j["character"];
      r.character_id = c.value("id", r.character_id);
      if (c.contains("personal_attribute_patterns"))
        r.personal_attribute_patterns =
            c["personal_attribute_patterns"].get<std::vector<std::string>>();
      if (c.contains("sentiment")) {
        const auto s = parse_sentiment(c["sentiment"].get<std::string>());
        if (!s) throw Error(ErrorCode::ConfigError, "rules: unknown sentiment", "flags");
        r.character_sentiment = *s;
      }
    }
    if (j.contains("framing")) r.framing_id = j["framing"].value("id", r.framing_id);
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::ConfigError, std::string("rules: ") + ex.what(), "flags");
  }
  return r;
}

RulesConfig RulesConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open rules " + path.string(), "flags");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

InjusticeFlags derive_flags(const TaggedWord& tagged, const LookupResult& lookup,
                            const RelevanceVerdict& verdict,
                            const std::vector<StereotypeCandidate>& ranked,
                            const SentimentLabel& sentiment, const RulesConfig& rules) {
  InjusticeFlags flags;
  const BiasTypeSet& types = lookup.bias_types;

  std::vector<std::string> hits;
  for (BiasType t : types)
    if (rules.testimonial_types.count(t)) hits.emplace_back(to_string(t));
  if (tagged.probability >= rules.testimonial_p_min && !hits.empty() && verdict.relevant) {
    flags.testimonial = true;
    std::string joined;
    for (const auto& h : hits) joined += (joined.empty() ? "" : ",") + h;
    flags.rationale.push_back(rules.testimonial_id + ": p=" + fmt_double(tagged.probability) +
                              " >= " + fmt_double(rules.testimonial_p_min) + "; bias_types {" +
                              joined + "}; top stereotype similarity " +
                              fmt_double(verdict.top_stereotype->similarity) + " > " +
                              fmt_double(verdict.threshold));
  }

  if (verdict.relevant && sentiment.value == rules.character_sentiment) {
    for (const StereotypeCandidate& c : ranked) {
      if (c.kind != CandidateKind::Stereotype || !(c.similarity > verdict.threshold)) continue;
      for (const std::string& pattern : rules.personal_attribute_patterns) {
        if (!contains_ci(c.text, pattern)) continue;
        flags.character = true;
        flags.rationale.push_back(rules.character_id + ": stereotype \"" + c.text + "\" (" +
                                  fmt_double(c.similarity) + ") matches \"" + pattern +
                                  "\"; sentiment " + std::string(to_string(sentiment.value)));
        break;
      }
      if (flags.character) break;
    }
  }

  const bool has_bias_type = lookup.matched && !types.count(BiasType::Regular);
  if (has_bias_type && sentiment.value != Sentiment::Neutral) {
    flags.framing_evidence = true;
    std::string joined;
    for (BiasType t : types) joined += (joined.empty() ? "" : ",") + std::string(to_string(t));
    flags.rationale.push_back(rules.framing_id + ": bias_types {" + joined + "}; sentiment " +
                              std::string(to_string(sentiment.value)) + " (" +
                              fmt_double(sentiment.score) + ")");
  }
  return flags;
}

}  // namespace epibias
