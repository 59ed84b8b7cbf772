// Snowball English (Porter2) stemmer.

#include <array>
#include <string>
#include <string_view>
#include <utility>

#include "epibias/textprep.hpp"

namespace epibias {

namespace {

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

bool is_double(std::string_view w) {
  if (w.size() < 2) return false;
  static constexpr std::string_view kDoubles[] = {"bb", "dd", "ff", "gg", "mm",
                                                  "nn", "pp", "rr", "tt"};
  for (auto d : kDoubles)
    if (ends_with(w, d)) return true;
  return false;
}

bool is_li_ending(char c) {
  return c == 'c' || c == 'd' || c == 'e' || c == 'g' || c == 'h' || c == 'k' || c == 'm' ||
         c == 'n' || c == 'r' || c == 't';
}

// Region after the first non-vowel following a vowel, starting at `from`.
std::size_t region_after(std::string_view w, std::size_t from) {
  for (std::size_t i = from + 1; i < w.size(); ++i) {
    if (!is_vowel(w[i]) && is_vowel(w[i - 1])) return i + 1;
  }
  return w.size();
}

bool ends_short_syllable(std::string_view w) {
  const std::size_t n = w.size();
  if (n == 2) return is_vowel(w[0]) && !is_vowel(w[1]);
  if (n >= 3) {
    char a = w[n - 3], b = w[n - 2], c = w[n - 1];
    return !is_vowel(a) && is_vowel(b) && !is_vowel(c) && c != 'w' && c != 'x' && c != 'Y';
  }
  return false;
}

struct Regions {
  std::size_t r1;
  std::size_t r2;
};

Regions compute_regions(std::string_view w) {
  std::size_t r1 = w.size();
  for (std::string_view prefix : {"gener", "commun", "arsen"}) {
    if (w.substr(0, prefix.size()) == prefix) {
      r1 = prefix.size();
      break;
    }
  }
  if (r1 == w.size()) r1 = region_after(w, 0);
  std::size_t r2 = r1 < w.size() ? region_after(w, r1) : w.size();
  if (r2 < r1) r2 = r1;
  return {r1, r2};
}

bool in_region(const std::string& w, std::string_view suffix, std::size_t region) {
  return w.size() - suffix.size() >= region;
}

bool contains_vowel(std::string_view w) {
  for (char c : w)
    if (is_vowel(c)) return true;
  return false;
}

std::string step1b(std::string w, std::size_t r1) {
  static constexpr std::array<std::string_view, 6> kSuffixes{"eedly", "ingly", "edly",
                                                             "eed",   "ing",   "ed"};
  for (std::string_view suf : kSuffixes) {
    if (!ends_with(w, suf)) continue;
    if (suf == "eed" || suf == "eedly") {
      if (in_region(w, suf, r1)) w.replace(w.size() - suf.size(), suf.size(), "ee");
      return w;
    }
    std::string_view stem(w.data(), w.size() - suf.size());
    if (!contains_vowel(stem)) return w;
    w.resize(stem.size());
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
      w += 'e';
    } else if (is_double(w)) {
      w.pop_back();
    } else if (r1 >= w.size() && ends_short_syllable(w)) {
      w += 'e';
    }
    return w;
  }
  return w;
}

using Rule = std::pair<std::string_view, std::string_view>;

std::string step2(std::string w, std::size_t r1) {
  static constexpr std::array<Rule, 25> kRules{{
      {"ization", "ize"}, {"ational", "ate"}, {"fulness", "ful"}, {"ousness", "ous"},
      {"iveness", "ive"}, {"tional", "tion"}, {"biliti", "ble"},  {"lessli", "less"},
      {"entli", "ent"},   {"ation", "ate"},   {"alism", "al"},    {"aliti", "al"},
      {"ousli", "ous"},   {"iviti", "ive"},   {"fulli", "ful"},   {"enci", "ence"},
      {"anci", "ance"},   {"abli", "able"},   {"izer", "ize"},    {"ator", "ate"},
      {"alli", "al"},     {"bli", "ble"},     {"ogi", "og"},      {"li", ""},
      {"", ""},
  }};
  for (const auto& [suf, rep] : kRules) {
    if (suf.empty()) break;
    if (!ends_with(w, suf)) continue;
    if (!in_region(w, suf, r1)) return w;
    const std::size_t at = w.size() - suf.size();
    if (suf == "ogi") {
      if (at > 0 && w[at - 1] == 'l') w.replace(at, suf.size(), rep);
    } else if (suf == "li") {
      if (at > 0 && is_li_ending(w[at - 1])) w.resize(at);
    } else {
      w.replace(at, suf.size(), rep);
    }
    return w;
  }
  return w;
}

std::string step3(std::string w, std::size_t r1, std::size_t r2) {
  static constexpr std::array<Rule, 9> kRules{{
      {"ational", "ate"}, {"tional", "tion"}, {"alize", "al"}, {"icate", "ic"},
      {"iciti", "ic"},    {"ative", ""},      {"ical", "ic"},  {"ness", ""},
      {"ful", ""},
  }};
  for (const auto& [suf, rep] : kRules) {
    if (!ends_with(w, suf)) continue;
    if (!in_region(w, suf, r1)) return w;
    if (suf == "ative" && !in_region(w, suf, r2)) return w;
    w.replace(w.size() - suf.size(), suf.size(), rep);
    return w;
  }
  return w;
}

std::string step4(std::string w, std::size_t r2) {
  static constexpr std::array<std::string_view, 18> kSuffixes{
      "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ism",
      "ate",   "iti",  "ous",  "ive",  "ize",  "ion",  "al",  "er",  "ic"};
  for (std::string_view suf : kSuffixes) {
    if (!ends_with(w, suf)) continue;
    if (!in_region(w, suf, r2)) return w;
    const std::size_t at = w.size() - suf.size();
    if (suf == "ion") {
      if (at > 0 && (w[at - 1] == 's' || w[at - 1] == 't')) w.resize(at);
    } else {
      w.resize(at);
    }
    return w;
  }
  return w;
}

std::string step5(std::string w, std::size_t r1, std::size_t r2) {
  if (ends_with(w, "e")) {
    const std::size_t at = w.size() - 1;
    if (at >= r2) {
      w.pop_back();
    } else if (at >= r1 && !ends_short_syllable(std::string_view(w).substr(0, at))) {
      w.pop_back();
    }
  } else if (ends_with(w, "ll") && w.size() - 1 >= r2) {
    w.pop_back();
  }
  return w;
}

}  // namespace

std::string snowball_stem(std::string_view input) {
  std::string w = to_lower(input);
  if (w.size() <= 2) return w;

  static constexpr std::array<Rule, 18> kExceptions{{
      {"skis", "ski"},   {"skies", "sky"},   {"dying", "die"},   {"lying", "lie"},
      {"tying", "tie"},  {"idly", "idl"},    {"gently", "gentl"}, {"ugly", "ugli"},
      {"early", "earli"}, {"only", "onli"},  {"singly", "singl"}, {"sky", "sky"},
      {"news", "news"},  {"howe", "howe"},   {"atlas", "atlas"}, {"cosmos", "cosmos"},
      {"bias", "bias"},  {"andes", "andes"},
  }};
  for (const auto& [from, to] : kExceptions)
    if (w == from) return std::string(to);

  if (!w.empty() && w.front() == '\'') w.erase(0, 1);
  if (w.empty()) return w;

  if (w[0] == 'y') w[0] = 'Y';
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == 'y' && is_vowel(w[i - 1])) w[i] = 'Y';

  const Regions rg = compute_regions(w);

  // step 0
  for (std::string_view suf : {"'s'", "'s", "'"}) {
    if (ends_with(w, suf)) {
      w.resize(w.size() - suf.size());
      break;
    }
  }

  // step 1a
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ied") || ends_with(w, "ies")) {
    w.resize(w.size() - 3);
    w += w.size() > 1 ? "i" : "ie";
  } else if (ends_with(w, "us") || ends_with(w, "ss")) {
    // unchanged
  } else if (ends_with(w, "s")) {
    std::string_view head(w.data(), w.size() - 1);
    if (head.size() >= 2 && contains_vowel(head.substr(0, head.size() - 1))) w.pop_back();
  }

  static constexpr std::string_view kInvariant1a[] = {"inning", "outing",  "canning", "herring",
                                                      "earring", "proceed", "exceed",  "succeed"};
  for (auto inv : kInvariant1a)
    if (w == inv) return w;

  w = step1b(std::move(w), rg.r1);

  // step 1c
  if (w.size() > 2 && (w.back() == 'y' || w.back() == 'Y') && !is_vowel(w[w.size() - 2])) {
    w.back() = 'i';
  }

  w = step2(std::move(w), rg.r1);
  w = step3(std::move(w), rg.r1, rg.r2);
  w = step4(std::move(w), rg.r2);
  w = step5(std::move(w), rg.r1, rg.r2);

  for (char& c : w)
    if (c == 'Y') c = 'y';
  return w;
}

std::string stem(std::string_view word) {
  std::string current = snowball_stem(word);
  // Snowball is not idempotent on a handful of words; a few passes settle it.
  for (int i = 0; i < 8; ++i) {
    std::string next = snowball_stem(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

}  // namespace epibias
