#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <unordered_map>

#include "epibias/textprep.hpp"

namespace epibias {

namespace {

using WordTags = std::unordered_map<std::string_view, PosTag>;

void add(WordTags& table, PosTag tag, std::initializer_list<std::string_view> words) {
  for (auto w : words) table.emplace(w, tag);
}

const WordTags& word_tags() {
  static const WordTags table = [] {
    WordTags t;
    add(t, PosTag::Det,
        {"a", "an", "the", "this", "that", "these", "those", "every", "each", "some", "any",
         "no", "all", "both", "either", "neither", "another", "such", "what", "which", "whose"});
    add(t, PosTag::Pron,
        {"i",          "me",        "my",         "mine",      "myself",   "you",
         "your",       "yours",     "yourself",   "yourselves", "he",      "him",
         "his",        "himself",   "she",        "her",       "hers",     "herself",
         "it",         "its",       "itself",     "we",        "us",       "our",
         "ours",       "ourselves", "they",       "them",      "their",    "theirs",
         "themselves", "who",       "whom",       "whoever",   "something", "anything",
         "nothing",    "everything", "someone",   "anyone",    "everyone", "nobody",
         "somebody",   "everybody", "one's",      "she's",     "he's",     "it's",
         "you're",     "they're",   "we're",      "i'm"});
    add(t, PosTag::Adp,
        {"in",     "on",      "at",     "by",    "for",     "with",   "about", "against",
         "between", "into",   "through", "during", "before", "after", "above", "below",
         "from",   "down",    "of",     "off",   "over",    "under",  "near",  "across",
         "behind", "beyond",  "like",   "since", "until",   "upon",   "within", "without",
         "via",    "amid",    "among",  "toward", "towards", "despite", "per", "as",
         "around", "inside",  "outside", "onto", "unlike",  "throughout"});
    add(t, PosTag::Conj,
        {"and", "or", "but", "nor", "because", "although", "though", "while", "if", "unless",
         "whether", "than", "whereas", "so"});
    add(t, PosTag::Prt, {"to", "not", "up", "out", "'s", "n't"});
    add(t, PosTag::Num,
        {"one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
         "eleven", "twelve", "twenty", "thirty", "forty", "fifty", "hundred", "thousand",
         "million", "billion", "dozen"});
    add(t, PosTag::Verb,
        {"be",     "is",      "are",     "was",     "were",   "been",   "being",  "am",
         "have",   "has",     "had",     "do",      "does",   "did",    "say",    "says",
         "said",   "go",      "goes",    "went",    "gone",   "get",    "gets",   "got",
         "make",   "makes",   "made",    "know",    "knew",   "think",  "thought", "take",
         "took",   "see",     "saw",     "come",    "came",   "give",   "gave",   "find",
         "found",  "tell",    "told",    "wear",    "wears",  "wore",   "worn",   "put",
         "keep",   "kept",    "win",     "won",     "hang",   "hung",   "spend",  "spent",
         "set",    "bark",    "barks",   "can",     "could",  "may",    "might",  "must",
         "shall",  "should",  "will",    "would",   "reveal",  "reveals", "protect", "follow",
         "follows", "confirm", "confirms", "let",   "run",    "ran",    "leave",  "left",
         "bring",  "brought", "become",  "became",  "seem",   "seems",  "want",   "wants",
         "need",   "needs"});
    add(t, PosTag::Adj,
        {"big",      "red",      "angry",    "happy",    "loud",     "new",      "old",
         "good",     "bad",      "great",    "small",    "large",    "little",   "long",
         "short",    "high",     "low",      "young",    "real",     "true",     "false",
         "fair",     "unfair",   "rich",     "poor",     "pregnant", "favourite", "favorite",
         "beloved",  "normal",   "royal",    "blue",     "green",    "black",    "white",
         "top",      "secret",   "daring",   "casual",   "modest",
         "full",     "empty",    "free",     "sure",     "clear",    "hot",      "cold",
         "dark",     "strong",   "weak",     "nice",     "fine",     "pretty",   "ugly",
         "sad",      "glad",     "proud",    "best",     "worst",    "better",   "worse",
         "main",     "major",    "final",    "first",    "last",     "next",     "late",
         "private",  "public",   "brave",    "quiet",
         "wonderful", "terrible", "awful",   "lovely",   "friendly", "silly",    "likely",
         "unlikely", "daily",    "early",    "elderly",  "holy",     "deadly",   "costly",
         "own",      "same",     "other",    "many",     "much",     "few",      "several",
         "certain",  "whole",    "entire"});
    add(t, PosTag::Adv,
        {"very",   "too",    "quite",   "rather",  "just",    "now",    "then",   "here",
         "there",  "still",  "already", "also",    "even",    "never",  "always", "often",
         "soon",   "again",  "almost",  "ever",    "yet",     "perhaps", "maybe", "once",
         "away",   "back",   "instead", "indeed",  "really",  "only",   "well",   "how",
         "why",    "when",   "where",   "ago",     "further", "more",   "most",   "less",
         "least"});
    add(t, PosTag::Noun,
        {"family", "lily", "supply", "reply", "ally", "rally", "bully", "belly", "jelly",
         "italy", "july", "assembly", "anomaly", "monopoly", "melody", "comedy", "tragedy",
         "remedy", "duchess", "princess", "dress", "news", "thing", "king", "wedding",
         "morning", "evening", "ring", "spring", "building", "meeting", "feeling",
         "upbringing", "clothing", "reading", "painting", "hospital", "festival", "rival",
         "animal", "arrival", "proposal", "approval", "trial", "ritual", "parent", "event",
         "moment", "president", "student", "agent", "talent", "giant", "servant", "tenant",
         "library", "salary", "diary", "summary", "anniversary", "dog", "dogs"});
    return t;
  }();
  return table;
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

}  // namespace

PosTag RulePosBackend::tag_word(std::string_view word) {
  const std::string lower = to_lower(word);
  if (auto it = word_tags().find(lower); it != word_tags().end()) return it->second;
  if (!has_letter(word)) {
    const bool digit = std::any_of(word.begin(), word.end(), [](unsigned char c) { return std::isdigit(c); });
    return digit ? PosTag::Num : PosTag::X;
  }

  // possessives and contractions keep the tag of their host noun
  if (ends_with(lower, "'s") || ends_with(lower, "\xE2\x80\x99s")) return PosTag::Noun;

  if (lower.size() > 4 && ends_with(lower, "ly")) return PosTag::Adv;
  for (std::string_view suf : {"ous", "ful", "ive", "able", "ible", "less", "ic", "ical", "ish",
                               "al"}) {
    if (lower.size() > suf.size() + 2 && ends_with(lower, suf)) return PosTag::Adj;
  }
  if (lower.size() > 5 && (ends_with(lower, "est") || ends_with(lower, "iest")) &&
      !ends_with(lower, "rest") && !ends_with(lower, "test"))
    return PosTag::Adj;
  if (lower.size() > 4 && ends_with(lower, "ing")) return PosTag::Verb;
  if (lower.size() > 3 && ends_with(lower, "ed")) return PosTag::Verb;
  for (std::string_view suf : {"ize", "ise", "ify", "ate"}) {
    if (lower.size() > suf.size() + 2 && ends_with(lower, suf)) return PosTag::Verb;
  }
  // unknown words, capitalized or not, default to nouns
  return PosTag::Noun;
}

std::vector<PosAnnotation> RulePosBackend::annotate(std::string_view sentence) const {
  std::vector<PosAnnotation> out;
  for (const SurfacePiece& piece : split_surface(sentence)) {
    PosAnnotation a;
    a.surface = piece.text;
    if (piece.is_punct) {
      a.pos = PosTag::Punct;
      a.lemma = piece.text;
    } else if (piece.is_number) {
      a.pos = PosTag::Num;
      a.lemma = to_lower(piece.text);
    } else {
      a.pos = tag_word(piece.text);
      a.lemma = lemmatize(piece.text, a.pos);
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace epibias
