#include <string>
#include <string_view>
#include <unordered_map>

#include "epibias/textprep.hpp"

namespace epibias {

namespace {

using Table = std::unordered_map<std::string_view, std::string_view>;

const Table& irregular_verbs() {
  static const Table table{
      {"am", "be"},           {"is", "be"},           {"are", "be"},
      {"was", "be"},          {"were", "be"},         {"been", "be"},
      {"being", "be"},        {"has", "have"},        {"had", "have"},
      {"having", "have"},     {"does", "do"},         {"did", "do"},
      {"done", "do"},         {"went", "go"},         {"gone", "go"},
      {"goes", "go"},         {"said", "say"},        {"says", "say"},
      {"made", "make"},       {"took", "take"},       {"taken", "take"},
      {"saw", "see"},         {"seen", "see"},        {"came", "come"},
      {"gave", "give"},       {"given", "give"},      {"found", "find"},
      {"told", "tell"},       {"thought", "think"},   {"knew", "know"},
      {"known", "know"},      {"got", "get"},         {"gotten", "get"},
      {"kept", "keep"},       {"won", "win"},         {"hung", "hang"},
      {"spent", "spend"},     {"ran", "run"},         {"began", "begin"},
      {"begun", "begin"},     {"brought", "bring"},   {"bought", "buy"},
      {"caught", "catch"},    {"felt", "feel"},       {"left", "leave"},
      {"lost", "lose"},       {"met", "meet"},        {"paid", "pay"},
      {"sold", "sell"},       {"sent", "send"},       {"stood", "stand"},
      {"wrote", "write"},     {"written", "write"},   {"spoke", "speak"},
      {"spoken", "speak"},    {"broke", "break"},     {"broken", "break"},
      {"chose", "choose"},    {"chosen", "choose"},   {"drove", "drive"},
      {"driven", "drive"},    {"ate", "eat"},         {"eaten", "eat"},
      {"fell", "fall"},       {"fallen", "fall"},     {"forgot", "forget"},
      {"forgotten", "forget"}, {"grew", "grow"},      {"grown", "grow"},
      {"held", "hold"},       {"led", "lead"},        {"rode", "ride"},
      {"ridden", "ride"},     {"rose", "rise"},       {"risen", "rise"},
      {"sang", "sing"},       {"sung", "sing"},       {"sat", "sit"},
      {"slept", "sleep"},     {"stole", "steal"},     {"stolen", "steal"},
      {"struck", "strike"},   {"swore", "swear"},     {"sworn", "swear"},
      {"taught", "teach"},    {"threw", "throw"},     {"thrown", "throw"},
      {"understood", "understand"}, {"woke", "wake"}, {"woken", "wake"},
      {"built", "build"},     {"dealt", "deal"},      {"dug", "dig"},
      {"fed", "feed"},        {"fought", "fight"},    {"fled", "flee"},
      {"flew", "fly"},        {"flown", "fly"},       {"forgave", "forgive"},
      {"forgiven", "forgive"}, {"hid", "hide"},       {"hidden", "hide"},
      {"meant", "mean"},      {"shot", "shoot"},      {"stuck", "stick"},
      {"swept", "sweep"},     {"tore", "tear"},       {"torn", "tear"},
      {"wept", "weep"},       {"wore", "wear"},       {"worn", "wear"},
      {"became", "become"},   {"sought", "seek"},     {"bore", "bear"},
      {"borne", "bear"},      {"drew", "draw"},       {"drawn", "draw"},
      {"shook", "shake"},     {"shaken", "shake"},    {"lay", "lie"},
      {"lain", "lie"},        {"laid", "lay"},        {"bit", "bite"},
      {"bitten", "bite"},     {"blew", "blow"},       {"blown", "blow"},
      {"froze", "freeze"},    {"frozen", "freeze"},   {"sank", "sink"},
      {"sunk", "sink"},       {"swam", "swim"},       {"swum", "swim"},
      {"dying", "die"},       {"lying", "lie"},       {"tying", "tie"},
  };
  return table;
}

const Table& irregular_nouns() {
  static const Table table{
      {"children", "child"}, {"men", "man"},       {"women", "woman"}, {"people", "person"},
      {"feet", "foot"},      {"teeth", "tooth"},   {"mice", "mouse"},  {"geese", "goose"},
      {"wives", "wife"},     {"lives", "life"},    {"knives", "knife"}, {"wolves", "wolf"},
      {"halves", "half"},    {"shelves", "shelf"}, {"thieves", "thief"}, {"leaves", "leaf"},
      {"data", "datum"},     {"criteria", "criterion"}, {"phenomena", "phenomenon"},
      {"princesses", "princess"}, {"duchesses", "duchess"},
  };
  return table;
}

const Table& irregular_adjectives() {
  static const Table table{
      {"better", "good"}, {"best", "good"}, {"worse", "bad"},  {"worst", "bad"},
      {"more", "much"},   {"most", "much"}, {"less", "little"}, {"least", "little"},
      {"further", "far"}, {"farther", "far"}, {"furthest", "far"}, {"farthest", "far"},
  };
  return table;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

bool has_vowel(std::string_view w) {
  for (char c : w)
    if (is_vowel(c) || c == 'y') return true;
  return false;
}

// One vowel group followed by one consonant: "hop", "us", "dar".
bool short_cvc(std::string_view w) {
  if (w.size() < 2 || w.size() > 4) return false;
  const char last = w.back();
  if (is_vowel(last) || last == 'w' || last == 'x' || last == 'y') return false;
  if (!is_vowel(w[w.size() - 2])) return false;
  std::size_t groups = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (is_vowel(w[i]) && (i == 0 || !is_vowel(w[i - 1]))) ++groups;
  return groups == 1 && !(w.size() >= 3 && is_vowel(w[w.size() - 3]));
}

bool undoublable(std::string_view w) {
  if (w.size() < 3) return false;
  const char c = w.back();
  if (c != w[w.size() - 2]) return false;
  return c == 'b' || c == 'd' || c == 'g' || c == 'm' || c == 'n' || c == 'p' || c == 'r' ||
         c == 't';
}

// Restores the base of a verb whose -ing/-ed ending was removed.
std::string repair_verb_base(std::string base) {
  if (undoublable(base)) {
    base.pop_back();
    return base;
  }
  if (ends_with(base, "v") || ends_with(base, "iz") || ends_with(base, "uc") ||
      (ends_with(base, "at") && base.size() > 4)) {
    return base + "e";
  }
  if (short_cvc(base)) return base + "e";
  return base;
}

std::string lemmatize_verb(const std::string& w) {
  if (auto it = irregular_verbs().find(w); it != irregular_verbs().end())
    return std::string(it->second);
  if (ends_with(w, "ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "ied") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "ied")) return w.substr(0, w.size() - 1);
  if (ends_with(w, "eed") && w.size() > 4) return w.substr(0, w.size() - 1);
  if (ends_with(w, "ing") && w.size() > 4) {
    std::string base = w.substr(0, w.size() - 3);
    if (has_vowel(base)) return repair_verb_base(std::move(base));
  }
  if (ends_with(w, "ed") && w.size() > 3) {
    std::string base = w.substr(0, w.size() - 2);
    if (has_vowel(base)) return repair_verb_base(std::move(base));
  }
  if (ends_with(w, "sses") || ends_with(w, "ches") || ends_with(w, "shes") ||
      ends_with(w, "xes") || ends_with(w, "zzes")) {
    return w.substr(0, w.size() - 2);
  }
  if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && w.size() > 3)
    return w.substr(0, w.size() - 1);
  return w;
}

std::string lemmatize_noun(const std::string& w) {
  if (auto it = irregular_nouns().find(w); it != irregular_nouns().end())
    return std::string(it->second);
  if (ends_with(w, "ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "sses") || ends_with(w, "ches") || ends_with(w, "shes") ||
      ends_with(w, "xes") || ends_with(w, "zzes")) {
    return w.substr(0, w.size() - 2);
  }
  if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is") &&
      w.size() > 3) {
    return w.substr(0, w.size() - 1);
  }
  return w;
}

std::string lemmatize_adjective(const std::string& w) {
  if (auto it = irregular_adjectives().find(w); it != irregular_adjectives().end())
    return std::string(it->second);
  if (ends_with(w, "iest") && w.size() > 5) return w.substr(0, w.size() - 4) + "y";
  if (ends_with(w, "ier") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  return w;
}

}  // namespace

std::string lemmatize(std::string_view word, std::optional<PosTag> pos) {
  const std::string w = to_lower(word);
  if (!has_letter(w)) return w;
  if (pos) {
    switch (*pos) {
      case PosTag::Verb: return lemmatize_verb(w);
      case PosTag::Noun: return lemmatize_noun(w);
      case PosTag::Adj: return lemmatize_adjective(w);
      default: return w;
    }
  }
  // No context: verb, then noun, then adjective reading.
  if (irregular_verbs().count(w) || ends_with(w, "ing") || ends_with(w, "ed")) {
    std::string v = lemmatize_verb(w);
    if (v != w) return v;
  }
  if (std::string n = lemmatize_noun(w); n != w) return n;
  return lemmatize_adjective(w);
}

}  // namespace epibias
