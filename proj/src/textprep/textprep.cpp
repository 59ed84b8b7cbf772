#include <array>
#include <string>

#include "epibias/error.hpp"
#include "epibias/textprep.hpp"

namespace epibias {

namespace {

constexpr std::array<std::string_view, kPosTagCount> kPosNames{
    "NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "NUM", "CONJ", "PRT", "PUNCT", "X"};

bool has_word_char(std::string_view s) {
  if (has_letter(s)) return true;
  for (char c : s)
    if (c >= '0' && c <= '9') return true;
  return false;
}

}  // namespace

std::string_view to_string(PosTag tag) { return kPosNames[static_cast<std::size_t>(tag)]; }

std::optional<PosTag> parse_pos_tag(std::string_view name) {
  for (std::size_t i = 0; i < kPosNames.size(); ++i)
    if (kPosNames[i] == name) return static_cast<PosTag>(i);
  if (name == ".") return PosTag::Punct;
  return std::nullopt;
}

std::string_view to_string(TmiValue v) { return v == TmiValue::Tmi ? "tmi" : "no_tmi"; }

LemmaStem lemma_and_stem(std::string_view word, std::optional<PosTag> pos) {
  if (word.empty()) throw Error(ErrorCode::EmptyInput, "lemma_and_stem: empty word", "textprep");
  return {lemmatize(word, pos), stem(word)};
}

std::vector<Token> tokenize(std::string_view text, const PosBackend& backend,
                            const StopWords& stopwords) {
  if (!has_word_char(text))
    throw Error(ErrorCode::EmptyInput, "text contains no word characters", "textprep");

  std::vector<PosAnnotation> annotations = backend.annotate(text);
  std::vector<Token> tokens;
  tokens.reserve(annotations.size());
  std::size_t cursor = 0;
  for (PosAnnotation& a : annotations) {
    if (a.surface.empty()) continue;
    Token t;
    t.index = tokens.size();
    t.pos = a.pos;
    const std::string lower = to_lower(a.surface);
    if (has_letter(a.surface)) {
      t.lemma = a.lemma.empty() ? lower : to_lower(a.lemma);
      t.stem = stem(lower);
      if (t.stem.empty()) t.stem = lower;
    } else {
      t.lemma = lower;
      t.stem = lower;
    }
    t.is_stopword = stopwords.contains(lower);
    const std::size_t found = text.find(a.surface, cursor);
    if (found != std::string_view::npos) {
      t.offset = found;
      cursor = found + a.surface.size();
    } else {
      t.offset = cursor;
    }
    t.surface = std::move(a.surface);
    tokens.push_back(std::move(t));
  }
  if (tokens.empty())
    throw Error(ErrorCode::EmptyInput, "backend returned no tokens", "textprep");
  return tokens;
}

std::string detokenize(const std::vector<Token>& tokens) {
  std::string out;
  for (const Token& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t.surface;
  }
  return out;
}

std::vector<Token> remove_stopwords(const std::vector<Token>& tokens) {
  std::vector<Token> kept;
  kept.reserve(tokens.size());
  for (const Token& t : tokens)
    if (!t.is_stopword) kept.push_back(t);
  return kept;
}

TmiLabel tmi_label(const std::vector<Token>& tokens) {
  TmiLabel label;
  for (const Token& t : tokens)
    if (t.pos == PosTag::Adj || t.pos == PosTag::Adv) ++label.descriptor_count;
  label.value = label.descriptor_count > 2 ? TmiValue::Tmi : TmiValue::NoTmi;
  return label;
}

}  // namespace epibias
