#include <array>
#include <utility>

#include "epibias/lexicon.hpp"

namespace epibias {

namespace {

constexpr std::array<std::pair<BiasType, std::string_view>, 10> kNames{{
    {BiasType::Assertives, "assertives"},
    {BiasType::Factives, "factives"},
    {BiasType::Hedges, "hedges"},
    {BiasType::Implicatives, "implicatives"},
    {BiasType::Entailments, "entailments"},
    {BiasType::Report, "report"},
    {BiasType::Subjectives, "subjectives"},
    {BiasType::Positive, "positive"},
    {BiasType::Negative, "negative"},
    {BiasType::Regular, "regular"},
}};

}  // namespace

std::string_view to_string(BiasType type) {
  for (const auto& [t, name] : kNames)
    if (t == type) return name;
  return "regular";
}

std::optional<BiasType> parse_bias_type(std::string_view name) {
  for (const auto& [t, n] : kNames)
    if (n == name) return t;
  return std::nullopt;
}

std::vector<std::string> to_strings(const BiasTypeSet& types) {
  std::vector<std::string> out;
  out.reserve(types.size());
  for (BiasType t : types) out.emplace_back(to_string(t));
  return out;
}

std::string_view to_string(MatchStage stage) {
  switch (stage) {
    case MatchStage::Exact: return "exact";
    case MatchStage::Lemma: return "lemma";
    case MatchStage::Stem: return "stem";
    case MatchStage::None: return "none";
  }
  return "none";
}

}  // namespace epibias
