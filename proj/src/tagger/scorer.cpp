#include <cmath>

#include "epibias/error.hpp"
#include "epibias/kernels.hpp"
#include "epibias/tagger.hpp"

namespace epibias {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logit(double p) { return std::log(p / (1.0 - p)); }

double expert_logit(std::span<const double> f, const ScorerWeights& w) {
  if (f.size() != w.d_f)
    throw Error(ErrorCode::DimensionMismatch,
                "feature vector has " + std::to_string(f.size()) + " entries, weights expect " +
                    std::to_string(w.d_f),
                "tagger");
  std::vector<double> hidden(w.d_h);
  kernels::vecmat_relu(f, w.w_in, w.d_h, hidden);
  return kernels::dot(hidden, w.w_e);
}

double word_logit(std::span<const double> f, std::span<const double> b_i, const ScorerWeights& w) {
  if (b_i.size() != w.d_b)
    throw Error(ErrorCode::DimensionMismatch,
                "embedding has " + std::to_string(b_i.size()) + " entries, weights expect " +
                    std::to_string(w.d_b),
                "tagger");
  return kernels::dot(b_i, w.w_b) + expert_logit(f, w) + w.b;
}

std::vector<double> score_words(const std::vector<WordFeatures>& features,
                                const std::vector<std::vector<double>>& embeddings,
                                const ScorerWeights& weights) {
  if (features.size() != embeddings.size())
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(features.size()) + " feature vectors but " +
                    std::to_string(embeddings.size()) + " embeddings",
                "tagger");
  const auto check_finite = [](const std::vector<double>& v, const char* what) {
    for (double x : v)
      if (!std::isfinite(x))
        throw Error(ErrorCode::NonFiniteInput, std::string(what) + " contains NaN or inf", "tagger");
  };
  std::vector<double> out;
  out.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    check_finite(features[i].f, "feature vector");
    check_finite(embeddings[i], "embedding");
    out.push_back(sigmoid(word_logit(features[i].f, embeddings[i], weights)));
  }
  return out;
}

std::size_t argmax_lowest_index(std::span<const double> probabilities) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probabilities.size(); ++i)
    if (probabilities[i] > probabilities[best]) best = i;
  return best;
}

}  // namespace epibias
