#pragma once

// JSON encoding of the pipeline's outputs. Field names are stable; the
// schemas are published in docs/openapi.json.

#include "json.hpp"

#include "epibias/analysis.hpp"

namespace epibias {

nlohmann::json to_json(const LookupResult& r);
nlohmann::json to_json(const TaggedWord& t);
nlohmann::json to_json(const StereotypeCandidate& c);
nlohmann::json to_json(const RelevanceVerdict& v);
nlohmann::json to_json(const AnalysisReport& r);
nlohmann::json to_json(const BreakdownNode& n);
nlohmann::json to_json(const ComparativeBreakdown& b);
nlohmann::json to_json(const FramingDivergence& d);
nlohmann::json to_json(const BiasResource& r);

// {"reports": n, "breakdown": ..., "framing_divergence": ...} over `reports`.
nlohmann::json breakdown_document(const std::vector<AnalysisReport>& reports,
                                  const std::string& subject_a, const std::string& subject_b,
                                  double margin = 0.25);

// Human-readable report; the tagged word is wrapped in [[ ]] in the sentence.
std::string to_pretty_text(const AnalysisReport& r);

// Inverse of to_json(AnalysisReport). Throws Error(ParseError).
AnalysisReport report_from_json(const nlohmann::json& j);

// One compact JSON object per line.
std::string to_jsonl(const std::vector<AnalysisReport>& reports);
// Throws Error(ParseError) naming the offending line.
std::vector<AnalysisReport> reports_from_jsonl(std::string_view text);

}  // namespace epibias
