#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace epibias {

// Universal POS tagset.
enum class PosTag { Noun, Verb, Adj, Adv, Pron, Det, Adp, Num, Conj, Prt, Punct, X };

inline constexpr std::size_t kPosTagCount = 12;

std::string_view to_string(PosTag tag);
std::optional<PosTag> parse_pos_tag(std::string_view name);

struct Token {
  std::string surface;
  std::size_t index = 0;     // 0-based, contiguous within a sentence
  PosTag pos = PosTag::X;
  std::string lemma;         // lowercase
  std::string stem;          // lowercase
  bool is_stopword = false;
  std::size_t offset = 0;    // byte offset of surface in the source text
};

enum class TmiValue { NoTmi, Tmi };

struct TmiLabel {
  TmiValue value = TmiValue::NoTmi;
  std::size_t descriptor_count = 0;

  friend bool operator==(const TmiLabel&, const TmiLabel&) = default;
};

std::string_view to_string(TmiValue v);

// One element of a POS backend response; mirrors the wire format
// {surface, pos, lemma}.
struct PosAnnotation {
  std::string surface;
  PosTag pos = PosTag::X;
  std::string lemma;
};

// Splits a sentence into words and tags them. Implementations must be safe to
// call concurrently.
class PosBackend {
 public:
  virtual ~PosBackend() = default;
  virtual std::vector<PosAnnotation> annotate(std::string_view sentence) const = 0;
  virtual std::string id() const = 0;
};

// Bundled deterministic tagger: closed-class word lists, a small open-class
// lexicon and suffix rules. Lemmas come from the rule lemmatizer.
class RulePosBackend final : public PosBackend {
 public:
  std::vector<PosAnnotation> annotate(std::string_view sentence) const override;
  std::string id() const override { return "rule-pos/1"; }

  // Tag of a single word out of context.
  static PosTag tag_word(std::string_view word);
};

// Raw surface splitting used by the bundled backend. Words keep internal
// hyphens and apostrophes; currency symbols attach to the amount that
// follows; every other punctuation mark is its own piece.
struct SurfacePiece {
  std::string text;
  std::size_t offset = 0;
  bool is_punct = false;
  bool is_number = false;
};
std::vector<SurfacePiece> split_surface(std::string_view text);

class StopWords {
 public:
  using WordSet = std::set<std::string, std::less<>>;

  StopWords() = default;
  explicit StopWords(WordSet words) : words_(std::move(words)) {}

  // One lowercase word per line; blank lines and '#' comments ignored.
  static StopWords load(const std::filesystem::path& path);
  // The list shipped in data/stopwords.txt, compiled in.
  static const StopWords& builtin();

  bool contains(std::string_view lowercase_word) const;
  std::size_t size() const { return words_.size(); }
  const WordSet& words() const { return words_; }

 private:
  WordSet words_;
};

// Snowball (Porter2) English stemmer applied until it reaches a fixed point,
// so stem(stem(w)) == stem(w). Input is lowercased first.
std::string stem(std::string_view word);
// A single Snowball pass with no fixed-point iteration.
std::string snowball_stem(std::string_view word);

// Rule lemmatizer with irregular-form tables. With no tag, verb, noun and
// adjective readings are tried in that order.
std::string lemmatize(std::string_view word, std::optional<PosTag> pos = std::nullopt);

struct LemmaStem {
  std::string lemma;
  std::string stem;
  friend bool operator==(const LemmaStem&, const LemmaStem&) = default;
};

// Throws Error(EmptyInput) on an empty word.
LemmaStem lemma_and_stem(std::string_view word, std::optional<PosTag> pos = std::nullopt);

// Tokenizes with the given backend and fills stem / stop-word flags.
// Throws Error(EmptyInput) if the text has no word characters.
std::vector<Token> tokenize(std::string_view text, const PosBackend& backend,
                            const StopWords& stopwords = StopWords::builtin());

// Surfaces joined with single spaces.
std::string detokenize(const std::vector<Token>& tokens);

std::vector<Token> remove_stopwords(const std::vector<Token>& tokens);

// Counts ADJ and ADV tokens; more than two is TMI.
TmiLabel tmi_label(const std::vector<Token>& tokens);

std::string to_lower(std::string_view s);
bool has_letter(std::string_view s);

}  // namespace epibias
