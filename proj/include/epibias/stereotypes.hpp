#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epibias/backends.hpp"

namespace epibias {

enum class CandidateKind { Stereotype, Concept };

std::string_view to_string(CandidateKind kind);

struct StereotypeCandidate {
  std::string text;
  CandidateKind kind = CandidateKind::Stereotype;
  GeneratorOrigin origin = GeneratorOrigin::Costar;
  double similarity = 0.0;
  int rank = 0;  // 1-based within kind; 0 until ranked
};

struct RelevanceVerdict {
  std::optional<StereotypeCandidate> top_stereotype;
  std::optional<StereotypeCandidate> top_concept;
  bool relevant = false;
  double threshold = 0.3;
};

struct StereotypeConfig {
  std::string sentence_model_id = "all-MiniLM-L6-v2";
  double threshold = 0.3;
  std::size_t max_stereotypes = 6;
  std::size_t max_concepts = 3;
};

// Pools the generators' outputs in backend order, dropping repeats of the
// same (kind, normalized text), then caps each kind. Generator errors
// propagate.
std::vector<StereotypeCandidate> generate_candidates(
    const std::string& sentence, const std::vector<const GeneratorBackend*>& backends,
    const StereotypeConfig& config = {});

// Cosine similarity of each candidate to the sentence, then stereotypes
// followed by concepts, each sorted by similarity descending (ties by text)
// and ranked from 1. Throws Error(ZeroVector) for a zero embedding.
std::vector<StereotypeCandidate> rank_by_similarity(const std::string& sentence,
                                                    std::vector<StereotypeCandidate> candidates,
                                                    const EmbeddingBackend& embeddings,
                                                    const std::string& model_id);

// Sorts a pool that already carries similarities and assigns ranks.
void assign_ranks(std::vector<StereotypeCandidate>& candidates);

RelevanceVerdict select_relevant(const std::vector<StereotypeCandidate>& ranked,
                                 double threshold = 0.3);

}  // namespace epibias
