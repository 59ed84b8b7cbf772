#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "epibias/textprep.hpp"

namespace epibias {

// Epistemological bias categories. Positive/negative polarity is listed
// alongside the expert categories; `Regular` marks a word found nowhere in
// the lexicon and never co-occurs with another value.
enum class BiasType {
  Assertives,
  Factives,
  Hedges,
  Implicatives,
  Entailments,
  Report,
  Subjectives,
  Positive,
  Negative,
  Regular,
};

// The nine lexicon categories, i.e. every BiasType except Regular, in the
// order used by feature vectors.
inline constexpr std::array<BiasType, 9> kLexiconCategories{
    BiasType::Assertives, BiasType::Factives,    BiasType::Hedges,
    BiasType::Implicatives, BiasType::Report,    BiasType::Entailments,
    BiasType::Subjectives, BiasType::Positive,   BiasType::Negative};

std::string_view to_string(BiasType type);
std::optional<BiasType> parse_bias_type(std::string_view name);

// Ordered by name so serialized sets come out alphabetically, the way
// reports print them ("entailments", "positive", "subjectives").
struct BiasTypeNameLess {
  bool operator()(BiasType a, BiasType b) const { return to_string(a) < to_string(b); }
};
using BiasTypeSet = std::set<BiasType, BiasTypeNameLess>;

std::vector<std::string> to_strings(const BiasTypeSet& types);

struct LexiconEntry {
  std::string word;  // trimmed, lowercase, unique in a store
  BiasTypeSet bias_types;
  std::string source;
  std::string creators;
  std::string resource_url;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

enum class MatchStage { Exact, Lemma, Stem, None };

std::string_view to_string(MatchStage stage);

struct LookupResult {
  bool matched = false;
  std::optional<std::string> matched_key;
  MatchStage match_stage = MatchStage::None;
  BiasTypeSet bias_types{BiasType::Regular};
  std::vector<LexiconEntry> entries;
};

// Immutable after construction; lookups are safe from any number of threads.
class LexiconStore {
 public:
  LexiconStore() = default;

  // JSON Lines: one {word, bias_types[], source, creators, resource_url}
  // record per line. Records that share a word are merged (types unioned,
  // metadata joined with "; "). Throws Error(ParseError) naming the line.
  static LexiconStore load(const std::filesystem::path& path);
  static LexiconStore parse(std::string_view jsonl, std::string_view origin = "<memory>");
  static LexiconStore from_records(const std::vector<LexiconEntry>& records);

  // One line per merged entry, sorted by word.
  std::string serialize() const;

  // Cascade: exact lowercase key, then the lemma (using `pos` when given),
  // then the stem. The stem stage accepts a key equal to the stem or any key
  // whose own stem equals it; all keys in that family contribute their types.
  // Throws Error(EmptyInput) on an empty word.
  LookupResult lookup(std::string_view word, std::optional<PosTag> pos = std::nullopt) const;

  const LexiconEntry* find(std::string_view lowercase_word) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, LexiconEntry, std::less<>>& entries() const { return entries_; }

  // Number of distinct lexicon categories a feature layout must reserve.
  static constexpr std::size_t category_count() { return kLexiconCategories.size(); }

 private:
  void add(LexiconEntry record);
  void index_stems();

  std::map<std::string, LexiconEntry, std::less<>> entries_;
  std::unordered_map<std::string, std::vector<std::string>> by_stem_;
};

// Metadata behind the UI's "learn more" links, one per bias type.
struct BiasResource {
  BiasType type = BiasType::Regular;
  std::string title;
  std::string description;
  std::string resource_url;
};

class ResourceCatalog {
 public:
  // JSON object keyed by bias-type name.
  static ResourceCatalog load(const std::filesystem::path& path);
  static ResourceCatalog parse(std::string_view json);

  const BiasResource* find(BiasType type) const;
  const std::map<BiasType, BiasResource>& all() const { return resources_; }

 private:
  std::map<BiasType, BiasResource> resources_;
};

}  // namespace epibias
