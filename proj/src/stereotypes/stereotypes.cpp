#include <algorithm>
#include <set>
#include <unordered_map>

#include "epibias/error.hpp"
#include "epibias/hashing.hpp"
#include "epibias/kernels.hpp"
#include "epibias/stereotypes.hpp"

namespace epibias {

std::string_view to_string(CandidateKind kind) {
  return kind == CandidateKind::Stereotype ? "stereotype" : "concept";
}

std::vector<StereotypeCandidate> generate_candidates(
    const std::string& sentence, const std::vector<const GeneratorBackend*>& backends,
    const StereotypeConfig& config) {
  std::vector<StereotypeCandidate> pool;
  std::set<std::pair<CandidateKind, std::string>> seen;
  std::size_t n_stereotypes = 0, n_concepts = 0;

  const auto push = [&](const std::string& text, CandidateKind kind, GeneratorOrigin origin) {
    std::string norm = normalize_text(text);
    if (norm.empty()) return;
    std::size_t& count = kind == CandidateKind::Stereotype ? n_stereotypes : n_concepts;
    const std::size_t cap =
        kind == CandidateKind::Stereotype ? config.max_stereotypes : config.max_concepts;
    if (count >= cap) return;
    if (!seen.emplace(kind, std::move(norm)).second) return;
    ++count;
    pool.push_back({text, kind, origin, 0.0, 0});
  };

  for (const GeneratorBackend* backend : backends) {
    const GeneratorOutput out = backend->generate(sentence);
    for (const std::string& s : out.stereotypes)
      push(s, CandidateKind::Stereotype, backend->origin());
    for (const std::string& c : out.concepts) push(c, CandidateKind::Concept, backend->origin());
  }
  return pool;
}

void assign_ranks(std::vector<StereotypeCandidate>& candidates) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const StereotypeCandidate& a, const StereotypeCandidate& b) {
                     if (a.kind != b.kind) return a.kind == CandidateKind::Stereotype;
                     if (a.similarity != b.similarity) return a.similarity > b.similarity;
                     return a.text < b.text;
                   });
  int rank_s = 0, rank_c = 0;
  for (StereotypeCandidate& c : candidates)
    c.rank = c.kind == CandidateKind::Stereotype ? ++rank_s : ++rank_c;
}

std::vector<StereotypeCandidate> rank_by_similarity(const std::string& sentence,
                                                    std::vector<StereotypeCandidate> candidates,
                                                    const EmbeddingBackend& embeddings,
                                                    const std::string& model_id) {
  if (candidates.empty()) return candidates;
  const std::vector<double> anchor = embeddings.embed_sentence(model_id, sentence);
  std::unordered_map<std::string, double> cache;
  for (StereotypeCandidate& c : candidates) {
    auto it = cache.find(c.text);
    if (it == cache.end()) {
      const std::vector<double> v = embeddings.embed_sentence(model_id, c.text);
      it = cache.emplace(c.text, kernels::cosine(anchor, v)).first;
    }
    c.similarity = it->second;
  }
  assign_ranks(candidates);
  return candidates;
}

RelevanceVerdict select_relevant(const std::vector<StereotypeCandidate>& ranked, double threshold) {
  RelevanceVerdict v;
  v.threshold = threshold;
  const auto better = [](const StereotypeCandidate& a, const StereotypeCandidate& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.text < b.text;
  };
  for (const StereotypeCandidate& c : ranked) {
    auto& slot = c.kind == CandidateKind::Stereotype ? v.top_stereotype : v.top_concept;
    if (!slot || better(c, *slot)) slot = c;
  }
  v.relevant = v.top_stereotype && v.top_stereotype->similarity > threshold;
  return v;
}

}  // namespace epibias
